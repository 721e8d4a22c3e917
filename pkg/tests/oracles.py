"""Reference values computed independently with mpmath at 30 digits."""

ASINH_6PI = 3.63033941350702551732
# root of x**3/3 + x = pi/2
LORENTZ_FIRST_ZERO = 1.11220148898512048549
# 2 * int_10^inf sech(x) dx
SECH_TAIL_X10 = 1.81599718925171100045e-4
# root of 0.01 (z+1)**4 = 2 - z, and 3(z-1)/(z+1)**2 there
WELL_Z_001 = 1.56627600280753567462
WELL_BARRIER_001 = 0.257954249497154364410
