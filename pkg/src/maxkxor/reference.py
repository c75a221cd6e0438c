"""Reference values used as golden rows (all truncated, not rounded)."""

import math

# k -> (C_qaoa, gamma*sqrt(D), beta, C_threshold, alpha)
LARGE_DEGREE_TABLE = {
    2: (0.30326, 1.00001, 0.39269, 0.33649, -0.43845),
    3: (0.33146, 1.05351, 0.29000, 0.34754, -0.56611),
    4: (0.35594, 1.09779, 0.23644, 0.35948, -0.64611),
    5: (0.37671, 1.13477, 0.20254, 0.37008, -0.70408),
    6: (0.39459, 1.16637, 0.17879, 0.37934, -0.74931),
    7: (0.41025, 1.19393, 0.16105, 0.38748, -0.78625),
    8: (0.42415, 1.21833, 0.14721, 0.39471, -0.81739),
    9: (0.43665, 1.24021, 0.13605, 0.40120, -0.84426),
    10: (0.44799, 1.26005, 0.12683, 0.40707, -0.86783),
    11: (0.45837, 1.27817, 0.11906, 0.41243, -0.88881),
    12: (0.46793, 1.29485, 0.11241, 0.41736, -0.90769),
    13: (0.47679, 1.31031, 0.10664, 0.42192, -0.92483),
    14: (0.48505, 1.32469, 0.10157, 0.42615, -0.94052),
    15: (0.49279, 1.33815, 0.09708, 0.43010, -0.95497),
    16: (0.50005, 1.35081, 0.09307, 0.43381, -0.96836),
    17: (0.50690, 1.36273, 0.08946, 0.43729, -0.98083),
    18: (0.51338, 1.37399, 0.08619, 0.44058, -0.99249),
    19: (0.51953, 1.38469, 0.08322, 0.44370, -1.00344),
}

# pure k-spin ground-state energy densities: k -> (independent known value or None, computed)
PARISI_TABLE = {
    2: (1.07928, 1.0799),
    3: (1.150, 1.1504),
    4: (None, 1.1674),
    5: (None, 1.1732),
    6: (None, 1.1756),
    7: (None, 1.1765),
    8: (None, 1.1770),
    9: (None, 1.1772),
    10: (None, 1.1773),
    11: (None, 1.1773),
    12: (None, 1.1773),
    13: (None, 1.1774),
    14: (None, 1.1774),
    15: (None, 1.1774),
}

# Max kSAT mixed-model values: k -> (B, C)
KSAT_TABLE = {
    3: (2.2176, 0.277),
    4: (3.7457, 0.234),
    5: (5.8483, 0.182),
    6: (8.7320, 0.136),
    7: (13.239, 0.103),
    8: (18.362, 0.071),
    9: (26.246, 0.051),
}

# degrees D < 300 at which depth-1 QAOA beats the optimised threshold rule for k = 3
K3_QAOA_WINNERS = (3, 4, 6, 8, 11, 13, 18, 20, 27)

K3_LIMIT_T = 1.0535
K3_LIMIT_BETA = 0.29
REM_LIMIT = math.sqrt(2 * math.log(2))
MAXCUT_PARISI_CONSTANT = 0.7632
