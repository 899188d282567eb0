"""Published reference data for the order-4 atlas (and the small orders).

Representative tuples, cogredience conjugators, solved first rows ("c"
columns) and printed characteristic polynomials.  Tuples use 1-based cycle
notation exactly as they are usually printed, including fixed points.
"""

from __future__ import annotations

from fractions import Fraction as Q

# Order 2 and 3: one fixture tuple per class, in the order the classes are listed.
ORDER2_TUPLES = ["((12))"]
ORDER3_TUPLES = ["((132),(123))", "((123),(132))"]

# Orbits of the 24 tuples whose generic matrices are Latin squares.  Each row
# is (A, B, X): the generic matrices of tuples A and B satisfy  Xᵀ·A·X = B.
LATIN_ROWS = {
    "C1": [("((12)(34),(1324),(1423))", "((1243),(1342),(14)(23))", "(1)(24)(3)"),
           ("((12)(34),(1324),(1423))", "((1234),(13)(24),(1432))", "(1)(23)(4)")],
    "C2": [("((12)(34),(14)(23),(13)(24))", "((13)(24),(12)(34),(14)(23))", "(1)(24)(3)"),
           ("((12)(34),(14)(23),(13)(24))", "((14)(23),(13)(24),(12)(34))", "(1)(23)(4)")],
    "C3": [("((1432),(1234),(13)(24))", "((1342),(14)(23),(1243))", "(1)(2)(34)"),
           ("((1432),(1234),(13)(24))", "((1243),(14)(23),(1342))", "(1324)"),
           ("((1432),(1234),(13)(24))", "((13)(24),(1432),(1234))", "(1)(24)(3)"),
           ("((1432),(1234),(13)(24))", "((13)(24),(1234),(1432))", "(1234)"),
           ("((1432),(1234),(13)(24))", "((1423),(12)(34),(1324))", "(1)(243)"),
           ("((1432),(1234),(13)(24))", "((1423),(1324),(12)(34))", "(1243)"),
           ("((1432),(1234),(13)(24))", "((1234),(1432),(13)(24))", "(13)(24)"),
           ("((1432),(1234),(13)(24))", "((1324),(12)(34),(1423))", "(123)(4)"),
           ("((1432),(1234),(13)(24))", "((14)(23),(1243),(1342))", "(1)(234)"),
           ("((1432),(1234),(13)(24))", "((1324),(1423),(12)(34))", "(1)(23)(4)"),
           ("((1432),(1234),(13)(24))", "((14)(23),(1342),(1243))", "(124)(3)")],
    "C4": [("((13)(24),(14)(23),(12)(34))", "((14)(23),(12)(34),(13)(24))", "(1)(23)(4)")],
    "C5": [],
    "C6": [("((12)(34),(1423),(1324))", "((1432),(13)(24),(1234))", "(1)(23)(4)"),
           ("((12)(34),(1423),(1324))", "((1342),(1243),(14)(23))", "(1)(24)(3)")],
}

LATIN_REPRESENTATIVES = {
    "C1": "((12)(34),(1324),(1423))",
    "C2": "((12)(34),(14)(23),(13)(24))",
    "C3": "((1432),(1234),(13)(24))",
    "C4": "((13)(24),(14)(23),(12)(34))",
    "C5": "((12)(34),(13)(24),(14)(23))",
    "C6": "((12)(34),(1423),(1324))",
}

# Sizes of the Latin orbits among the 24 Latin tuples.
LATIN_ORBIT_SIZES = {"C1": 3, "C2": 3, "C3": 12, "C4": 2, "C5": 1, "C6": 3}

REPEATED_ENTRY_TUPLES = {
    "C7": "((1)(2)(3)(4),(1)(2)(34),(1)(2)(34))",
    "C8": "((1)(2)(34),(1)(2)(34),(1)(2)(3)(4))",
    "C9": "((1)(2)(34),(1)(243),(1)(24)(3))",
    "C10": "((1)(2)(34),(1)(24)(3),(1)(243))",
    "C11": "((1)(24)(3),(1)(2)(34),(1)(243))",
    "C12": "((1)(243),(1)(2)(34),(1)(24)(3))",
    "C13": "((1)(24)(3),(1)(243),(1)(2)(34))",
    "C14": "((1)(243),(1)(24)(3),(1)(2)(34))",
    "C15": "((1)(2)(34),(1)(24)(3),(142)(3))",
    "C16": "((1)(2)(34),(1)(243),(1432))",
    "C17": "((1)(234),(1)(24)(3),(14)(2)(3))",
    "C18": "((1234),(14)(2)(3),(124)(3))",
    "C19": "((1)(24)(3),(1)(2)(34),(142)(3))",
    "C20": "((1)(2)(34),(142)(3),(1)(24)(3))",
    "C21": "((1)(2)(34),(1432),(1)(243))",
    "C22": "((14)(2)(3),(1234),(124)(3))",
    "C23": "((1)(243),(1)(2)(34),(1432))",
    "C24": "((1)(24)(3),(1)(234),(14)(2)(3))",
    "C25": "((1)(234),(14)(2)(3),(1)(24)(3))",
    "C26": "((1234),(124)(3),(14)(2)(3))",
    "C27": "((1)(2)(3)(4),(12)(34),(12)(34))",
    "C28": "((12)(34),(12)(34),(1)(2)(3)(4))",
    "C29": "((1)(2)(34),(12)(3)(4),(12)(34))",
    "C30": "((12)(34),(12)(3)(4),(1)(2)(34))",
    "C31": "((1)(234),(12)(34),(132)(4))",
    "C32": "((1)(243),(123)(4),(13)(24))",
    "C33": "((132)(4),(12)(34),(1)(234))",
    "C34": "((1)(23)(4),(12)(34),(1342))",
    "C35": "((1)(23)(4),(1243),(13)(24))",
    "C36": "((1342),(12)(34),(1)(23)(4))",
    "C37": "((1)(23)(4),(1342),(12)(34))",
}

ORDER4_TUPLES = dict(LATIN_REPRESENTATIVES, **REPEATED_ENTRY_TUPLES)

# Solved first rows for the tuples of the real-spectrum table, with the free
# parameters as printed.
CONSTRAINT_COLUMNS = {
    "C7": ("(I4,(34),(34))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C8": ("((34),(34),I4)", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C10": ("((34),(24),(243))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C12": ("((243),(34),(24))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C13": ("((24),(243),(34))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C14": ("((243),(24),(34))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C18": ("((1234),(14),(124))", ["c4"], ["1-3c4", "3c4-1/2", "1/2-c4", "c4"]),
    "C22": ("((14),(1234),(124))", ["c4"], ["1-3c4", "3c4-1/2", "1/2-c4", "c4"]),
    "C24": ("((24),(234),(14))", ["c1"], ["c1", "3c1-1/2", "1/2-c1", "1-3c1"]),
    "C27": ("(I4,(12)(34),(12)(34))", ["c1", "c3"], ["c1", "1/2-c1", "c3", "1/2-c3"]),
    "C28": ("((12)(34),(12)(34),I4)", ["c1", "c3"], ["c1", "1/2-c1", "c3", "1/2-c3"]),
    "C29": ("((34),(12),(12)(34))", ["c1", "c3"], ["c1", "1/2-c1", "c3", "1/2-c3"]),
    "C35": ("((23),(1243),(13)(24))", ["c1", "c2"], ["c1", "c2", "1/2-c1", "1/2-c2"]),
    "C36": ("((1342),(12)(34),(23))", ["c1", "c3"], ["c1", "1/2-c1", "c3", "1/2-c3"]),
}

# First rows used alongside the complex-spectrum formulas.
SPECTRUM_FIRST_ROWS = {
    "C9": ("((34),(243),(24))", ["c3"], ["1/4", "1/4", "c3", "1/2-c3"]),
    "C17": ("((234),(24),(14))", ["c1"], ["c1", "3c1-1/2", "1/2-c1", "1-3c1"]),
    "C19": ("((24),(34),(142))", ["c1"], ["c1", "1-3c1", "1/2-c1", "3c1-1/2"]),
    "C21": ("((34),(1432),(243))", ["c1"], ["c1", "1-3c1", "3c1-1/2", "1/2-c1"]),
    "C26": ("((1234),(124),(14))", ["c4"], ["1-3c4", "3c4-1/2", "1/2-c4", "c4"]),
}

# The first row printed next to the second T4 complex formula; it is not a
# solution of that tuple's column constraints (see the ledger).
ALTERNATE_C11_FIRST_ROW = ("((24),(34),(243))", ["c3"], ["1/4", "1/2-c3", "c3", "1/4"])


# ---------------------------------------------------------------------------
# printed characteristic polynomials, coefficient lists [x^0, x^1, x^2, x^3, x^4]


def _p3(c1, c2, c3, c4):
    return [
        c1**4 - 4*c1**2*c2*c4 - 2*c1**2*c3**2 + 4*c1*c2**2*c3 + 4*c1*c3*c4**2 - c2**4
        + 2*c2**2*c4**2 - 4*c2*c3**2*c4 + c3**4 - c4**4,
        -c1**3 + c1**2*c3 + 2*c1**2*c4 - c1*c2**2 - 4*c1*c2*c3 + 2*c1*c2*c4 + c1*c3**2
        - c1*c4**2 + 2*c2**3 - c2**2*c3 + 2*c2*c3*c4 - 2*c2*c4**2 - c3**3 + 2*c3**2*c4
        - c3*c4**2,
        2*c1*c2 - 2*c1*c4 + 2*c2*c3 - 2*c3*c4,
        -c1 - 2*c2 - c3,
        Q(1),
    ]


def _p4(c1, c2, c3, c4):
    return [
        c1**4 - 2*c1**2*c2**2 - 2*c1**2*c3**2 - 2*c1**2*c4**2 + 8*c1*c2*c3*c4 + c2**4
        - 2*c2**2*c3**2 - 2*c2**2*c4**2 + c3**4 - 2*c3**2*c4**2 + c4**4,
        -c1**3 + c1**2*c2 + c1**2*c3 + c1**2*c4 + c1*c2**2 - 2*c1*c2*c3 - 2*c1*c2*c4
        + c1*c3**2 - 2*c1*c3*c4 + c1*c4**2 - c2**3 + c2**2*c3 + c2**2*c4 + c2*c3**2
        - 2*c2*c3*c4 + c2*c4**2 - c3**3 + c3**2*c4 + c3*c4**2 - c4**3,
        Q(0),
        -(c1 + c2 + c3 + c4),
        Q(1),
    ]


def _p15(c1):
    h = Q(1, 2)
    return [72*c1**2 - 96*c1**3 - 18*c1 + 3*h, 18*c1 - 72*c1**2 - 3*h + 96*c1**3,
            h - 2*c1, 2*c1 - 3*h, Q(1)]


def _p16(c1):
    h = Q(1, 2)
    return [-72*c1**2 + 96*c1**3 + 18*c1 - 3*h, -26*c1 + 88*c1**2 + 5*h - 96*c1**3,
            -h + 6*c1 - 16*c1**2, 2*c1 - 3*h, Q(1)]


def _p20(c1):
    h = Q(1, 2)
    return [96*c1**3 - 72*c1**2 + 18*c1 - 3*h, 72*c1**2 - 96*c1**3 - 18*c1 + 3*h,
            -6*c1 + 3*h, -5*h + 6*c1, Q(1)]


def _p23(c1):
    h = Q(1, 2)
    return [72*c1**2 - 96*c1**3 - 18*c1 + 3*h, 96*c1**3 - 80*c1**2 + 22*c1 - 2,
            -h + 8*c1**2, -4*c1, Q(1)]


def _p25(c1):
    h = Q(1, 2)
    return [-96*c1**3 + 72*c1**2 - 18*c1 + 3*h, 96*c1**3 - 48*c1**2 + 6*c1,
            -24*c1**2 + 12*c1 - 3*h, Q(-1), Q(1)]


# class -> (tuple, free parameter names, first row, polynomial, argument names)
# The polynomial takes the first-row entries (Latin classes, c1..c4) or the
# single free parameter (the T3 classes).
PRINTED_CHAR_POLYS = {
    "C3": ("((1432),(1234),(13)(24))", ["c1", "c2", "c3"], None, _p3),
    "C4": ("((13)(24),(14)(23),(12)(34))", ["c1", "c2", "c3"], None, _p4),
    "C15": ("((34),(24),(142))", ["c1"], ["c1", "1-3c1", "1/2-c1", "3c1-1/2"], _p15),
    "C16": ("((34),(243),(1432))", ["c1"], ["c1", "1-3c1", "3c1-1/2", "1/2-c1"], _p16),
    "C20": ("((34),(142),(24))", ["c1"], ["c1", "1-3c1", "1/2-c1", "3c1-1/2"], _p20),
    "C23": ("((243),(34),(1432))", ["c1"], ["c1", "1-3c1", "3c1-1/2", "1/2-c1"], _p23),
    "C25": ("((234),(14),(24))", ["c1"], ["c1", "3c1-1/2", "1/2-c1", "1-3c1"], _p25),
}

# Printed extrema of the auxiliary radicands over [0, 1/2]^2: (max, min).
AUX_EXTREMA = {
    "f": (Q(2), Q(0)),
    "f1": (Q(2), Q(-1)),
    "f2": (Q(2, 7), Q(-1)),
    "f3": (Q(1, 2), Q(-1, 4)),
    "f4": (Q(4, 7), Q(-4, 9)),
}

# Printed per-class maxima of |Re| and |Im| over non-real eigenvalues.
COMPLEX_EXTENTS = {
    "C9": (1 / 8, 7**0.5 / 8),
    "C11": (1 / 4, 1 / 4),
    "C17": (1 / 4, 15**0.5 / 12),
    "C19": (1 / 6, 5**0.5 / 6),
    "C21": (1 / 3, 1 / 3),
    "C26": (1 / 4, 15**0.5 / 12),
    "C30": (1 / 2, 1 / 2),
    "C31": (1 / 2, 1 / 2),
    "C32": (1 / 4, 1 / 4),
    "C34": (1 / 4, 1 / 3),
    "C37": (1 / 2, 1 / 2),
}

# Scan ranges for the conjectured boundary curves.
BOUNDARY_T_RANGE = (0.82032, 1.0)
BOUNDARY_S_RANGE = (0.76786, 1.0)
