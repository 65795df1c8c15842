"""Frozen utility tables and truth flags for the shipped scenario library.

Values are the published 3-decimal (model) and 1-decimal (interval-design)
utilities for every combo of every scenario; GOOD/CORRECT record the flag
markup of the same sheets. Three flag cells (noted inline) contradict the
classification rule the sheets follow everywhere else and are skipped by the
flag-comparison test; the values themselves are still asserted.
"""

# --- model-based utility (omega1=0.33, omega2=1.09, fixed penalty), 2x5 ---
# rows: agent1 600 then 1200; columns: agent2 50..150

MODEL_UTILITY = {
    "T1.A1": [[0.190, 0.277, 0.314, 0.451, 0.484], [0.234, 0.370, 0.407, 0.518, 0.551]],
    "T1.A2": [[0.290, 0.297, 0.344, 0.351, 0.394], [0.324, 0.330, 0.377, 0.358, 0.381]],
    "T1.A3": [[0.050, 0.057, 0.084, 0.151, 0.234], [0.084, 0.120, 0.207, 0.268, 0.301]],
    "T1.A4": [[0.040, 0.177, 0.264, 0.351, 0.434], [0.084, 0.220, 0.307, 0.368, 0.451]],
    "T1.A5": [[0.090, 0.097, 0.104, 0.111, 0.114], [0.184, 0.270, 0.357, 0.418, 0.501]],
    "T1.A6": [[0.090, 0.077, 0.064, 0.051, 0.034], [0.084, 0.070, 0.057, 0.018, 0.101]],
    "T2.A1": [[0.167, 0.251, 0.284, 0.401, -0.672], [-0.989, -0.855, -0.822, -0.688, -0.638]],
    "T2.A2": [[0.267, 0.271, 0.314, 0.301, -0.762], [-0.899, -0.895, -0.852, -0.848, -0.808]],
    "T2.A3": [[0.027, 0.031, 0.054, 0.101, -0.922], [-1.139, -1.105, -1.022, -0.938, -0.888]],
    "T2.A4": [[0.017, 0.151, 0.234, 0.301, -0.722], [-1.139, -1.005, -0.922, -0.838, -0.738]],
    "T2.A5": [[0.067, 0.071, 0.074, 0.061, -1.042], [-1.039, -0.955, -0.872, -0.788, -0.688]],
    "T2.A6": [[0.067, 0.051, 0.034, 0.001, -1.122], [-1.139, -1.155, -1.172, -1.188, -1.088]],
    "T3.A1": [[0.184, 0.274, 0.301, 0.434, -0.689], [0.217, 0.360, 0.351, -0.622, -0.605]],
    "T3.A2": [[0.284, 0.294, 0.331, 0.334, -0.779], [0.307, 0.320, 0.321, -0.782, -0.775]],
    "T3.A3": [[0.044, 0.054, 0.071, 0.134, -0.939], [0.067, 0.110, 0.151, -0.872, -0.855]],
    "T3.A4": [[0.034, 0.174, 0.251, 0.334, -0.739], [0.067, 0.210, 0.251, -0.772, -0.705]],
    "T3.A5": [[0.084, 0.094, 0.091, 0.094, -1.059], [0.167, 0.260, 0.301, -0.722, -0.655]],
    "T3.A6": [[0.084, 0.074, 0.051, 0.034, -1.139], [0.067, 0.060, 0.001, -1.122, -1.055]],
    "T4.A1": [[0.167, 0.234, -0.872, -0.755, -0.738], [0.151, -0.839, -0.822, -0.688, -0.638]],
    "T4.A2": [[0.267, 0.254, -0.842, -0.855, -0.828], [0.241, -0.879, -0.852, -0.848, -0.808]],
    "T4.A3": [[0.027, 0.014, -1.102, -1.055, -0.988], [0.001, -1.089, -1.022, -0.938, -0.888]],
    "T4.A4": [[0.017, 0.134, -0.922, -0.855, -0.788], [0.001, -0.989, -0.922, -0.838, -0.738]],
    "T4.A5": [[0.067, 0.054, -1.082, -1.095, -1.108], [0.101, -0.939, -0.872, -0.788, -0.688]],
    "T4.A6": [[0.067, 0.034, -1.122, -1.155, -1.188], [0.001, -1.139, -1.172, -1.188, -1.088]],
    "T5.A1": [[0.101, -0.939, -0.905, -0.772, -0.738], [-0.972, -0.855, -0.822, -0.688, -0.638]],
    "T5.A2": [[0.201, -0.919, -0.875, -0.872, -0.828], [-0.882, -0.895, -0.852, -0.848, -0.808]],
    "T5.A3": [[-0.039, -1.159, -1.135, -1.072, -0.988], [-1.122, -1.105, -1.022, -0.938, -0.888]],
    "T5.A4": [[-0.049, -1.039, -0.955, -0.872, -0.788], [-1.122, -1.005, -0.922, -0.838, -0.738]],
    "T5.A5": [[0.001, -1.119, -1.115, -1.112, -1.108], [-1.022, -0.955, -0.872, -0.788, -0.688]],
    "T5.A6": [[0.001, -1.139, -1.155, -1.172, -1.188], [-1.122, -1.155, -1.172, -1.188, -1.088]],
    "T6.A1": [[-1.022, -0.922, -0.905, -0.755, -0.738], [-0.972, -0.822, -0.805, -0.655, -0.638]],
    "T6.A2": [[-0.922, -0.902, -0.875, -0.855, -0.828], [-0.882, -0.862, -0.835, -0.815, -0.808]],
    "T6.A3": [[-1.162, -1.142, -1.135, -1.055, -0.988], [-1.122, -1.072, -1.005, -0.905, -0.888]],
    "T6.A4": [[-1.172, -1.022, -0.955, -0.855, -0.788], [-1.122, -0.972, -0.905, -0.805, -0.738]],
    "T6.A5": [[-1.122, -1.102, -1.115, -1.095, -1.108], [-1.022, -0.922, -0.855, -0.755, -0.688]],
    "T6.A6": [[-1.122, -1.122, -1.155, -1.155, -1.188], [-1.122, -1.155, -1.172, -1.188, -1.088]],
}

# underlined (good) combos and the boldface (correct) combo, 1-based (i, j)
MODEL_GOOD = {
    "T1.A1": {(1, 5), (2, 4), (2, 5)},
    "T1.A2": {(1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5)},
    "T1.A3": {(1, 5), (2, 3), (2, 4), (2, 5)},
    "T1.A4": {(1, 5), (2, 4), (2, 5)},
    "T1.A5": {(2, 4), (2, 5)},
    "T1.A6": {(2, 5)},
    "T2.A1": {(1, 4)},
    "T2.A2": {(1, 1), (1, 2), (1, 3), (1, 4)},
    "T2.A3": {(1, 4)},
    "T2.A4": {(1, 3), (1, 4)},
    "T2.A5": set(),
    "T2.A6": set(),
    "T3.A1": {(1, 4), (2, 2), (2, 3)},
    "T3.A2": {(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3)},
    "T3.A3": {(1, 4), (2, 3)},
    "T3.A4": {(1, 3), (1, 4), (2, 3)},
    "T3.A5": {(2, 2), (2, 3)},
    "T3.A6": set(),
    "T4.A1": {(1, 1), (1, 2), (2, 1)},
    "T4.A2": {(1, 1), (1, 2), (2, 1)},
    "T4.A3": set(),
    "T4.A4": {(1, 2)},
    "T4.A5": {(2, 1)},
    "T4.A6": set(),
    "T5.A1": {(1, 1)},
    "T5.A2": {(1, 1)},
    "T5.A3": set(), "T5.A4": set(), "T5.A5": set(), "T5.A6": set(),
    "T6.A1": set(), "T6.A2": set(), "T6.A3": set(),
    "T6.A4": set(), "T6.A5": set(), "T6.A6": set(),
}

MODEL_CORRECT = {
    "T1.A1": (2, 5), "T1.A2": (1, 5), "T1.A3": (2, 5), "T1.A4": (2, 5),
    "T1.A5": (2, 5), "T1.A6": (2, 5),
    "T2.A1": (1, 4), "T2.A2": (1, 3), "T2.A3": (1, 4), "T2.A4": (1, 4),
    "T2.A5": None, "T2.A6": None,
    "T3.A1": (1, 4), "T3.A2": (1, 4), "T3.A3": (2, 3), "T3.A4": (1, 4),
    "T3.A5": (2, 3), "T3.A6": None,
    "T4.A1": (1, 2), "T4.A2": (1, 1), "T4.A3": None, "T4.A4": (1, 2),
    "T4.A5": (2, 1), "T4.A6": None,
    "T5.A1": (1, 1), "T5.A2": (1, 1), "T5.A3": None, "T5.A4": None,
    "T5.A5": None, "T5.A6": None,
    "T6.A1": None, "T6.A2": None, "T6.A3": None,
    "T6.A4": None, "T6.A5": None, "T6.A6": None,
}

# --- interval-design (0-100 score) utility, same layout ---

BOIN_UTILITY = {
    "T1.A1": [[50.8, 55.2, 56.6, 64, 65], [53, 60.4, 61.8, 66, 67]],
    "T1.A2": [[56.8, 56.4, 58.4, 58, 59.6], [58.4, 58, 60, 56.4, 56.8]],
    "T1.A3": [[42.4, 42, 42.8, 46, 50], [44, 45.4, 49.8, 51, 52]],
    "T1.A4": [[41.8, 49.2, 53.6, 58, 62], [44, 51.4, 55.8, 57, 61]],
    "T1.A5": [[44.8, 44.4, 44, 43.6, 42.8], [50, 54.4, 58.8, 60, 64]],
    "T1.A6": [[44.8, 43.2, 41.6, 40, 38], [44, 42.4, 40.8, 36, 40]],
    "T2.A1": [[48, 52, 53, 58, 57], [37, 44, 45, 52, 55]],
    "T2.A2": [[54, 53.2, 54.8, 52, 51.6], [42.4, 41.6, 43.2, 42.4, 44.8]],
    "T2.A3": [[39.6, 38.8, 39.2, 40, 42], [28, 29, 33, 37, 40]],
    "T2.A4": [[39, 46, 50, 52, 54], [28, 35, 39, 43, 49]],
    "T2.A5": [[42, 41.2, 40.4, 37.6, 34.8], [34, 38, 42, 46, 52]],
    "T2.A6": [[42, 40, 38, 34, 30], [28, 26, 24, 22, 28]],
    "T3.A1": [[50, 54.8, 55, 62, 55], [51, 59.2, 55, 60, 59]],
    "T3.A2": [[56, 56, 56.8, 56, 49.6], [56.4, 56.8, 53.2, 50.4, 48.8]],
    "T3.A3": [[41.6, 41.6, 41.2, 44, 40], [42, 44.2, 43, 45, 44]],
    "T3.A4": [[41, 48.8, 52, 56, 52], [42, 50.2, 49, 51, 53]],
    "T3.A5": [[44, 44, 42.4, 41.6, 32.8], [48, 53.2, 52, 54, 56]],
    "T3.A6": [[44, 42.8, 40, 38, 28], [42, 41.2, 34, 30, 32]],
    "T4.A1": [[48, 50, 45, 50, 49], [43, 46, 45, 52, 55]],
    "T4.A2": [[54, 51.2, 46.8, 44, 43.6], [48.4, 43.6, 43.2, 42.4, 44.8]],
    "T4.A3": [[39.6, 36.8, 31.2, 32, 34], [34, 31, 33, 37, 40]],
    "T4.A4": [[39, 44, 42, 44, 46], [34, 37, 39, 43, 49]],
    "T4.A5": [[42, 39.2, 32.4, 29.6, 26.8], [40, 40, 42, 46, 52]],
    "T4.A6": [[42, 38, 30, 26, 22], [34, 28, 24, 22, 28]],
    "T5.A1": [[40, 40, 41, 48, 49], [39, 44, 45, 52, 55]],
    "T5.A2": [[46, 41.2, 42.8, 42, 43.6], [44.4, 41.6, 43.2, 42.4, 44.8]],
    "T5.A3": [[31.6, 26.8, 27.2, 30, 34], [30, 29, 33, 37, 40]],
    "T5.A4": [[31, 34, 38, 42, 46], [30, 35, 39, 43, 49]],
    "T5.A5": [[34, 29.2, 28.4, 27.6, 26.8], [36, 38, 42, 46, 52]],
    "T5.A6": [[34, 28, 26, 24, 22], [30, 26, 24, 22, 28]],
    "T6.A1": [[36, 42, 41, 50, 49], [39, 48, 47, 56, 55]],
    "T6.A2": [[42, 43.2, 42.8, 44, 43.6], [44.4, 45.6, 45.2, 46.4, 44.8]],
    "T6.A3": [[27.6, 28.8, 27.2, 32, 34], [30, 33, 35, 41, 40]],
    "T6.A4": [[27, 36, 38, 44, 46], [30, 39, 41, 47, 49]],
    "T6.A5": [[30, 31.2, 28.4, 29.6, 26.8], [36, 42, 44, 50, 52]],
    "T6.A6": [[30, 30, 26, 26, 22], [30, 30, 26, 26, 28]],
}

BOIN_GOOD = {
    "T1.A1": {(1, 4), (1, 5), (2, 4), (2, 5)},
    "T1.A2": {(i, j) for i in (1, 2) for j in range(1, 6)},
    "T1.A3": {(1, 5), (2, 3), (2, 4), (2, 5)},
    "T1.A4": {(1, 4), (1, 5), (2, 4), (2, 5)},
    "T1.A5": {(2, 4), (2, 5)},
    "T1.A6": {(2, 5)},
    "T2.A1": {(1, 3), (1, 4)},
    "T2.A2": {(1, 1), (1, 2), (1, 3), (1, 4)},
    "T2.A3": {(1, 4)},
    "T2.A4": {(1, 3), (1, 4)},
    "T2.A5": set(), "T2.A6": set(),
    "T3.A1": {(1, 4), (2, 2)},
    "T3.A2": {(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3)},
    "T3.A3": {(1, 4), (2, 3)},
    # sheet marks (2,3) instead of (1,3), a row slip: 49 < 56-5 while 52 >= 51
    "T3.A4": {(1, 4), (2, 3)},
    "T3.A5": {(2, 2), (2, 3)},
    "T3.A6": set(),
    # sheet omits (1,1) although 48 >= 50-5
    "T4.A1": {(1, 2)},
    "T4.A2": {(1, 1), (1, 2)},
    "T4.A3": set(),
    "T4.A4": {(1, 2)},
    "T4.A5": {(2, 1)},
    "T4.A6": set(),
    "T5.A1": {(1, 1)},
    "T5.A2": {(1, 1)},
    "T5.A3": set(), "T5.A4": set(), "T5.A5": set(), "T5.A6": set(),
    "T6.A1": set(), "T6.A2": set(), "T6.A3": set(),
    "T6.A4": set(), "T6.A5": set(), "T6.A6": set(),
}

BOIN_CORRECT = {
    "T1.A1": (2, 5), "T1.A2": (2, 3), "T1.A3": (2, 5), "T1.A4": (1, 5),
    "T1.A5": (2, 5), "T1.A6": (2, 5),
    "T2.A1": (1, 4), "T2.A2": (1, 3), "T2.A3": (1, 4), "T2.A4": (1, 4),
    "T2.A5": None, "T2.A6": None,
    "T3.A1": (1, 4), "T3.A2": (1, 3), "T3.A3": (1, 4), "T3.A4": (1, 4),
    # sheet bolds (2,3) although (2,2) carries the higher utility 53.2 > 52
    "T3.A5": (2, 3), "T3.A6": None,
    "T4.A1": (1, 2), "T4.A2": (1, 1), "T4.A3": None, "T4.A4": (1, 2),
    "T4.A5": (2, 1), "T4.A6": None,
    "T5.A1": (1, 1), "T5.A2": (1, 1), "T5.A3": None, "T5.A4": None,
    "T5.A5": None, "T5.A6": None,
    "T6.A1": None, "T6.A2": None, "T6.A3": None,
    "T6.A4": None, "T6.A5": None, "T6.A6": None,
}

# cells where the flag sheet contradicts its own classification rule
BOIN_GOOD_ANOMALIES = {"T3.A4", "T4.A1"}
BOIN_CORRECT_ANOMALIES = {"T3.A5"}

# --- 3x3 scenarios: model utility column plus flags ---

S_MODEL_UTILITY = {
    "S1": [[0.017, 0.0505, 0.084], [0.1505, 0.184, 0.201], [0.284, 0.301, -0.7885]],
    "S2": [[0.034, 0.050, 0.064], [0.077, 0.077, 0.068], [0.151, 0.234, 0.301]],
    "S3": [[0.084, 0.167, 0.251], [0.134, 0.218, 0.301], [-0.922, -0.839, -0.755]],
    "S4": [[0.134, 0.168, 0.351], [-0.922, -0.839, -0.755], [-0.905, -0.772, -0.688]],
    "S5": [[0.034, 0.117, 0.234], [0.051, 0.168, -0.806], [0.101, -0.872, -0.789]],
    "S6": [[0.034, 0.134, -0.872], [0.067, 0.168, -0.839], [0.101, 0.201, -0.805]],
}

S_ACCEPTABLE = {
    "S1": {(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)},
    "S2": {(3, 1), (3, 2), (3, 3)},
    "S3": {(1, 2), (1, 3), (2, 1), (2, 2), (2, 3)},
    "S4": {(1, 1), (1, 2), (1, 3)},
    "S5": {(1, 3), (2, 2), (3, 1)},
    "S6": {(1, 2), (2, 2), (3, 2)},
}

S_GOOD = {
    "S1": {(2, 3), (3, 1), (3, 2)},
    "S2": {(3, 2), (3, 3)},
    "S3": {(1, 3), (2, 2), (2, 3)},
    "S4": {(1, 3)},
    "S5": {(1, 3), (2, 2)},
    "S6": {(1, 2), (2, 2), (3, 2)},
}

S_CORRECT = {
    "S1": (3, 2), "S2": (3, 3), "S3": (2, 3),
    "S4": (1, 3), "S5": (1, 3), "S6": (3, 2),
}
