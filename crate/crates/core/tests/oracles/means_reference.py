"""Reference values for the face-mean tests, evaluated at 50 digits.

Run: python3 means_reference.py
"""
from mpmath import mp, mpf, log

mp.dps = 50

PAIRS = [
    ("1.0", "1.000000000001"),
    ("1.0", "1.0000001"),
    ("1.0", "1.001"),
    ("1.0", "1.019"),
    ("1.0", "1.021"),
    ("1.0", "1.5"),
    ("1.0", "1.99"),
    ("1.0", "2.01"),
    ("1.0", "10.0"),
    ("1e-3", "1e3"),
    ("3.7", "3.7000037"),
]


def as_double(s):
    # the Rust test feeds the nearest double, so evaluate at that exact value
    return mpf(float(s))


print("log mean")
for a, b in PAIRS:
    x, y = as_double(a), as_double(b)
    print(f"        ({a}, {b}, {float((y - x) / (log(y) - log(x)))!r}),")

print("gap ratio")
for a, b in PAIRS:
    x, y = as_double(a), as_double(b)
    lm = (y - x) / (log(y) - log(x))
    print(f"        ({a}, {b}, {float(abs(((x + y) / 2 - lm) / (y - x)))!r}),")
