# Normalization of the bump phi(p) = c exp(-1/(1 - 4|p|^2)), |p| < 1/2,
# so that its integral over a plane through the origin is 1.
from mpmath import mp, quad, exp, pi

mp.dps = 30
integral = 2 * pi * quad(lambda r: exp(-1 / (1 - 4 * r * r)) * r, [0, 0.25, 0.5])
print(mp.nstr(1 / integral, 15))
