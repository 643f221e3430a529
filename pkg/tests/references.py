"""Frozen reference values computed with an independent arbitrary-precision
oracle (mpmath, 50 digits) before the implementation was written.

Regenerate with tests/oracles/gen_references.py; values are pasted here so
the suite never depends on mpmath.
"""

# K1(x) at fixed arguments, 20 significant digits.
K1_REFERENCES = {
    0.001: 999.99623815608557428,
    0.01: 99.973894118296247643,
    0.1: 9.8538447808706061348,
    1.0: 0.60190723019723457474,
    2.0: 0.13986588181652242728,
    10.0: 1.8648773453825584597e-05,
}

# Default link: -96 dBm noise, 0 dB threshold, alpha 4, 26 dBm budget, 50 m.
NOISE_W_REF = 2.5118864315095801111e-13
P_MAX_W_REF = 0.39810717055349725077
P_13DBM_W_REF = 0.019952623149688796014

# Relay at the midpoint, each node transmitting half the budget (watts).
GOLDEN_MIDPOINT_EXACT = 7.5756581191946082124e-06
GOLDEN_MIDPOINT_PSI = 7.0209377462023159994e-04
GOLDEN_MIDPOINT_APPROX = 7.6517775786785012232e-06
GOLDEN_MIDPOINT_PSI_APPROX = 7.0209360157684885152e-04
# |approx - exact| / exact at the midpoint: the log expansion drops a
# (2*euler_gamma - 1) * psi^2 term worth about 1% of the probability here.
GOLDEN_MIDPOINT_REL_GAP = 1.004790056e-02

# End-to-end SNR at the midpoint, equal split, both squared gains = 1.
SNR_MIDPOINT = 1014331.3931751742474
GAIN_SQ_MIDPOINT = 390624.80744719437893

# d(p_exact)/d(x, y) at relay (25, 1), half-budget watts split
# (high-order differentiation of the closed form, not central differences).
GRAD_X_25_1 = -9.768048929804316548e-07
GRAD_Y_25_1 = 4.5391858231192109963e-08

# Outage with both nodes at 13 dBm (the default start level) at the midpoint.
BASELINE_13DBM_MIDPOINT = 6.4265530346173761493e-05

# Mean y-coordinate of points uniform over the upper semicircle of radius R
# is 4R/(3*pi); for the 50 m link that is 100/(3*pi) = 10.6103...
SEMICIRCLE_MEAN_Y_50M = 10.610329539459689
