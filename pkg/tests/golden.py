"""Printed matrices and binomials used as frozen reference values."""

Z2 = [
    [1, 1, 1, 1],
    [0, 1, 0, 1],
    [0, 0, 1, 1],
    [0, 0, 1, 1],
    [0, 1, 0, 1],
    [0, 1, 1, 2],
]

E2 = Z2 + [
    [0, 0, 0, 1],
    [0, 0, 0, 1],
    [0, 0, 0, 1],
]

# simplified, n = 3, rows alpha, beta, theta, rho, rho_1..rho_3
E3_SIMPLIFIED = [
    [1, 0, 1, 1, 0, 1, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 1, 0, 1, 1],
    [0, 1, 1, 0, 1, 1, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 1, 0, 1, 1, 0, 1],
    [1, 1, 2, 1, 1, 2, 1, 1, 2],
    [0, 0, 1, 0, 0, 1, 0, 0, 1],
    [0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 1, 0, 0, 1],
]

# printed with rows lambda (6), theta, alpha (4), beta (4)
Z4_ROW_ORDER = ([f"lambda_{i}{j}" for i, j in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))]
                + ["theta"] + [f"alpha_{i}" for i in range(1, 5)] + [f"beta_{i}" for i in range(1, 5)])

_Z4_TEXT = """
1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1
0 1 1 2 0 1 1 2 0 1 1 2 0 1 1 2 0 1 1 2 0 1 1 2
0 1 0 1 0 1 0 1 0 1 0 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 1 1 0 0 0 0 0 0 0 0 0 1 0 1 0 1 0 1 0 0 0 0
0 0 0 0 0 0 1 1 0 0 0 0 0 0 1 1 0 0 0 0 0 1 0 1
0 0 0 0 0 0 0 0 0 0 1 1 0 0 0 0 0 0 1 1 0 0 1 1
0 0 1 1 0 0 1 1 0 0 1 1 0 0 0 0 0 0 0 0 0 0 0 0
0 1 0 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0 1 1 0 0 0 0
0 0 0 0 0 1 0 1 0 0 0 0 0 1 0 1 0 0 0 0 0 0 1 1
0 0 0 0 0 0 0 0 0 1 0 1 0 0 0 0 0 1 0 1 0 1 0 1
"""
Z4 = [[int(v) for v in line.split()] for line in _Z4_TEXT.strip().splitlines()]

# row/column sums matrix for n = 3, printed columns
B3 = [
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0],
]

# the two networks of the only interior n = 3 fiber, as one-hot vectors
CYCLE_PAIR = ["0 0 1 0 0 1 0 0 0 0 1 0", "0 1 0 0 0 0 1 0 0 1 0 0"]

# printed generators (node labels 1-based); some are printed unlifted
BINOMIALS = {
    "zero3_cubic": (3, "p12(0,1)p13(1,0)p23(0,1) - p12(1,0)p13(0,1)p23(1,0)"),
    "edge3_cubic": (3, "p12(1,0)p23(1,0)p13(0,1) - p12(0,1)p23(0,1)p13(1,0)"),
    "edge4_deg4": (4, "p13(0,0)p24(0,0)p14(0,1)p23(0,1) - p13(0,1)p24(0,1)p14(0,0)p23(0,0)"),
    "edge4_deg5": (4, "p13(0,0)p24(0,0)p14(0,1)p12(1,0)p23(1,0)"
                      " - p13(1,0)p24(0,1)p14(0,0)p12(0,1)p23(0,0)"),
    "overlap_quartic": (4, "p12(1,0)p13(1,1)p23(1,0)p24(1,0) - p12(0,1)p13(1,0)p14(1,0)p23(1,1)"),
    "worked_quartic": (4, "p12(1,0)p13(0,1)p14(0,1)p23(1,1) - p12(0,1)p13(1,1)p23(0,1)p24(0,1)"),
    "zero4_quartic_a": (4, "p12(1,1)p34(1,1)p23(0,0)p14(0,0) - p12(0,0)p34(0,0)p23(1,1)p14(1,1)"),
    "zero4_quartic_b": (4, "p23(1,1)p14(1,1)p13(0,0)p24(0,0) - p23(1,0)p14(1,0)p13(0,1)p24(0,1)"),
    "zero4_quartic_c": (4, "p23(1,1)p14(1,1)p12(0,0)p34(0,0) - p12(1,0)p23(1,0)p34(1,0)p14(0,1)"),
    "zero4_quartic_d": (4, "p12(0,0)p23(1,1)p34(0,1)p14(1,0) - p12(1,0)p23(1,0)p34(1,1)p14(0,0)"),
    "zero4_quintic_a": (4, "p12(0,0)p23(1,1)p34(0,1)p14(0,1)p24(1,0)"
                           " - p12(0,1)p23(1,0)p34(1,1)p14(0,0)p24(0,1)"),
    "zero4_quintic_b": (4, "p12(1,0)p23(1,0)p14(0,0)p13(1,1)p24(1,0)"
                           " - p12(0,1)p23(1,1)p14(1,0)p13(1,0)p24(0,0)"),
    "constant4_sextic": (4, "p12(0,0)p13(1,1)p14(1,1)p23(0,1)p24(1,0)p34(0,0)"
                            " - p12(1,1)p13(0,1)p14(1,0)p23(0,0)p24(0,0)p34(1,1)"),
    "a5_quintic": (5, "p14(1,0)p15(0,1)p23(1,0)p24(0,1)p35(1,0)"
                      " - p14(0,1)p15(1,0)p23(0,1)p24(1,0)p35(0,1)"),
}

# zero positions (1-based (row, col)) of the printed structural patterns
PATTERNS_3 = [
    {(1, 2), (2, 1)},
    {(1, 3), (3, 1)},
    {(2, 3), (3, 1)},   # as printed; (3, 1) reads as a misprint of (3, 2)
]
PATTERNS_4 = [
    {(1, 2), (1, 4), (2, 1), (2, 4), (4, 1), (4, 2)},
    {(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)},
    {(1, 3), (1, 4), (3, 1), (3, 4), (4, 1), (4, 3)},
    {(2, 3), (2, 4), (3, 2), (3, 4), (4, 2), (4, 3)},
]
