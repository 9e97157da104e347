"""Published reference values used by ``reproduce`` for the deviation report.

Methods without an implementation here (Ksh, Ksd) are omitted. Dataset keys
are lower-case names; ``lfr`` stands for the 2000-node LFR benchmark.
"""

from __future__ import annotations

DATASETS = ("karate", "dolphins", "polbooks", "football", "jazz",
            "usair", "email", "ws", "lfr", "yeast")

# name: (n, m, avg_degree, max_degree, beta_th, beta, assortativity)
TABLE1 = {
    "karate": (34, 78, 4.588, 17, 0.129, 0.13, -0.4756),
    "dolphins": (62, 159, 5.129, 12, 0.147, 0.15, -0.0436),
    "polbooks": (105, 441, 8.400, 25, 0.0838, 0.09, -0.1279),
    "football": (115, 613, 10.661, 12, 0.0932, 0.10, 0.1624),
    "jazz": (198, 2742, 27.967, 100, 0.026, 0.03, 0.0202),
    "usair": (332, 2126, 12.81, 139, 0.0225, 0.03, -0.2079),
    "email": (1133, 5451, 9.622, 71, 0.0535, 0.06, 0.0782),
    "ws": (2000, 6012, 6.021, 11, 0.1559, 0.16, -0.0563),
    "lfr": (2000, 4997, 9.988, 39, 0.0477, 0.05, -0.0032),
    "yeast": (2361, 7181, 6.083, 65, 0.0600, 0.07, -0.0489),
}
TABLE1_COLUMNS = ("n", "m", "avg_degree", "max_degree", "beta_th", "beta", "assortativity")

TABLE_METHODS = ("ks", "cn", "h", "lh", "gravity", "igc", "bc", "cc", "ec", "pagerank", "gsc")

# monotonicity per method, columns in TABLE_METHODS order
TABLE2 = {
    "karate": (0.4958, 0.8526, 0.5766, 0.8925, 0.9334, 0.9577, 0.7754, 0.8993, 0.9612, 0.9542, 0.9542),
    "dolphins": (0.3769, 0.9284, 0.6841, 0.9592, 0.9916, 0.9947, 0.9623, 0.9737, 0.9979, 0.9905, 0.9979),
    "polbooks": (0.4949, 0.9641, 0.7067, 0.9821, 0.9982, 0.9993, 0.9974, 0.9847, 0.9999, 0.9903, 0.9999),
    "football": (0.0003, 0.4218, 0.2349, 0.9190, 0.8626, 0.9903, 0.9999, 0.9488, 0.9999, 0.9903, 0.9999),
    "jazz": (0.7944, 0.9982, 0.9383, 0.9982, 0.9995, 0.9995, 0.9885, 0.9878, 0.9659, 0.9993, 0.9996),
    "usair": (0.8114, 0.9628, 0.8335, 0.9856, 0.9942, 0.9949, 0.6970, 0.9892, 0.9943, 0.9943, 0.9951),
    "email": (0.8089, 0.9839, 0.8584, 0.9899, 0.9996, 0.9998, 0.9400, 0.9988, 0.8875, 0.9988, 0.9999),
    "ws": (0.0002, 0.6085, 0.2904, 0.9155, 0.9757, 0.9982, 0.9999, 0.9987, 0.9999, 0.9954, 0.9999),
    "lfr": (0.0385, 0.9789, 0.7184, 0.9927, 0.9997, 0.9998, 0.9999, 0.9951, 0.5618, 0.7242, 0.9999),
    "yeast": (0.6643, 0.9458, 0.6873, 0.9686, 0.9959, 0.9964, 0.7012, 0.9964, 0.7210, 0.9916, 0.9965),
}

# Kendall tau against SIR spreading at the dataset's beta
TABLE3 = {
    "karate": (0.5799, 0.6789, 0.6219, 0.7079, 0.7580, 0.7838, 0.5433, 0.6626, 0.8245, 0.3535, 0.8332),
    "dolphins": (0.7363, 0.8275, 0.8420, 0.8678, 0.7499, 0.8091, 0.5900, 0.6175, 0.6132, 0.5948, 0.9006),
    "polbooks": (0.7196, 0.8143, 0.7946, 0.8507, 0.7505, 0.7713, 0.3646, 0.3715, 0.5818, 0.4516, 0.8693),
    "football": (0.1320, 0.4931, 0.3897, 0.4453, 0.4127, 0.3945, 0.1246, 0.1522, 0.3475, 0.3079, 0.4235),
    "jazz": (0.7690, 0.8765, 0.8615, 0.8885, 0.8001, 0.8102, 0.4912, 0.7219, 0.8458, 0.5949, 0.8909),
    "usair": (0.7550, 0.8462, 0.7580, 0.8478, 0.7532, 0.7782, 0.5590, 0.7805, 0.8361, 0.3710, 0.8851),
    "email": (0.8218, 0.8631, 0.8401, 0.8840, 0.8359, 0.8533, 0.8210, 0.8190, 0.8517, 0.5747, 0.8872),
    "ws": (0.1239, 0.6701, 0.5227, 0.6515, 0.6255, 0.6384, 0.6052, 0.5872, 0.6235, 0.4657, 0.7140),
    "lfr": (0.4049, 0.7004, 0.6795, 0.7065, 0.6614, 0.6571, 0.6843, 0.7033, 0.7157, 0.6278, 0.7090),
    "yeast": (0.7553, 0.8231, 0.7604, 0.8492, 0.7983, 0.8108, 0.6301, 0.5653, 0.7270, 0.3046, 0.8686),
}

TABLE4_METHODS = ("ks", "cn", "h", "lh", "gsc")

# top-10 node labels per method
TABLE4 = {
    "karate": {
        "ks": (34, 33, 31, 14, 9, 8, 4, 3, 2, 1),
        "cn": (1, 34, 3, 33, 2, 4, 32, 14, 9, 24),
        "h": (34, 33, 14, 3, 1, 31, 24, 9, 8, 4),
        "lh": (34, 1, 3, 33, 2, 4, 14, 9, 32, 24),
        "gsc": (1, 34, 3, 33, 9, 14, 32, 2, 4, 31),
    },
    "dolphins": {
        "ks": (60, 58, 55, 53, 52, 51, 48, 46, 44, 43),
        "cn": (15, 46, 38, 34, 21, 30, 41, 52, 58, 2),
        "h": (52, 51, 46, 41, 38, 34, 30, 25, 22, 21),
        "lh": (15, 46, 38, 34, 21, 30, 52, 51, 41, 19),
        "gsc": (38, 15, 46, 34, 51, 41, 22, 19, 30, 17),
    },
    "polbooks": {
        "ks": (101, 100, 92, 87, 85, 84, 83, 80, 77, 76),
        "cn": (9, 13, 85, 4, 73, 74, 31, 67, 48, 41),
        "h": (74, 85, 74, 83, 77, 76, 75, 73, 67, 48),
        "lh": (9, 85, 13, 74, 31, 73, 4, 67, 76, 75),
        "gsc": (9, 13, 85, 74, 31, 4, 67, 73, 12, 75),
    },
    "football": {
        "ks": (115, 114, 113, 112, 111, 110, 109, 108, 107, 106),
        "cn": (105, 89, 68, 54, 16, 8, 7, 6, 4, 3),
        "h": (84, 74, 68, 54, 50, 48, 47, 33, 16, 8),
        "lh": (68, 54, 89, 16, 3, 8, 7, 105, 2, 1),
        "gsc": (68, 8, 3, 54, 89, 16, 105, 7, 1, 4),
    },
    "jazz": {
        "ks": (172, 168, 158, 131, 130, 129, 106, 105, 104, 103),
        "cn": (100, 8, 4, 131, 80, 129, 5, 32, 194, 84),
        "h": (100, 8, 4, 131, 129, 80, 53, 5, 194, 69),
        "lh": (100, 8, 4, 131, 80, 129, 5, 194, 53, 69),
        "gsc": (100, 8, 4, 131, 80, 194, 129, 5, 53, 69),
    },
}

# overlap of each baseline's top-10 with the GSC top-10 (ks, cn, h, lh)
TOPK_OVERLAP = {
    "karate": (9, 9, 8, 9),
    "dolphins": (2, 6, 7, 8),
    "polbooks": (1, 8, 6, 9),
    "football": (0, 9, 4, 9),
}

# worked example on the 13-node illustration graph
WORKED_EXAMPLE = {
    "ndv": {13: (3, 3, 4, 2), 7: (5, 7, 0, 0), 8: (3, 4, 5, 0)},
    "dv": {13: (3, 6, 12, 8)},
    "pearson": {(7, 13): 0.0, (7, 8): 0.3035},
    "distance_corr": {(7, 8): 0.7069, (7, 13): 0.6789},
}
