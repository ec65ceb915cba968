"""
Exact numbers in Q(sqrt 5)
==========================

Every coordinate in the library is an exact ``a + b*sqrt(D)``.  Signs and
equality never go through floating point.
"""

from twoorbit import PHI, QArray, QNum

# the golden ratio satisfies phi^2 = phi + 1 exactly
print("phi      =", PHI)
print("phi^2    =", PHI * PHI)
print("phi + 1  =", PHI + 1)

# 1393/985 is within 4e-7 of sqrt 2; the sign is still decided exactly
x = QNum(-1393, 985, 2)
print("sign of -1393 + 985*sqrt2:", x.sign(), " float:", float(x))

# arrays keep a shared denominator and integer numerators
A = QArray.from_entries([[1, PHI], [PHI, 2]], 5)
print("A @ A =", (A @ A).entries())

# parse and print round-trip
y = QNum.parse("-1/4-1/4√5")
print(y, "==", -PHI / 2, ":", y == -PHI / 2)
