"""
Census and classification checks
================================

Build every registered object, compare with the frozen expected rows, and
check the classification statements on the census.
"""

import sys

from twoorbit import verify_theorems

res = verify_theorems()
sys.stdout.write(res.report)
print("status:", res.status)
