"""Frozen expected values.

Grids are hand-decoded reference grids, checked cell by cell; matrices and paths
were computed once by the pure-Python oracle in ``oracles.py`` and pasted
here.  Rows are listed top-down.
"""

START4 = ["..##", "#...", "..#.", ".###"]
MIX4A = ["#...", "..#.", "##..", "##.#"]
MIX4B = ["#..#", "..#.", "#...", "##.#"]
PLUS = ["#.#", "...", "#.#"]
OPEN = {
    "open4a": [".###", "....", ".#.#", ".#.#"],
    "open5": ["#.###", "#...#", "#.###", "#.#.#", "....."],
    "open4b": ["##.#", "....", ".#.#", "##.."],
}

# member (0 = mix4a, 1 = mix4b) refining each white square (col, row) of START4
SUPERMIXED_MAP = {(0, 3): 1, (1, 3): 0, (1, 2): 0, (2, 2): 1, (3, 2): 1,
                  (0, 1): 0, (1, 1): 1, (3, 1): 0, (0, 0): 0}

W2_ROWS = [
    "#..##...########",
    "..#...#.########",
    "#...##..########",
    "##.###.#########",
    "#####...#..##..#",
    "####..#...#...#.",
    "######..#...#...",
    "######.###.###.#",
    "#...#..######...",
    "..#...#.####..#.",
    "##..#...######..",
    "##.###.#######.#",
    "#...############",
    "..#.############",
    "##..############",
    "##.#############",
]

M_START4 = [[2, 0, 1, 1, 1, 1], [0, 2, 1, 1, 1, 1], [0, 1, 3, 0, 2, 0],
            [1, 1, 1, 2, 1, 1], [1, 0, 0, 0, 1, 0], [1, 1, 1, 0, 1, 1]]
M_MIX4A = [[2, 0, 1, 1, 1, 1], [0, 2, 1, 1, 1, 1], [0, 0, 2, 0, 1, 0],
           [1, 0, 0, 2, 0, 1], [2, 2, 0, 2, 1, 2], [0, 1, 0, 1, 0, 2]]
M_MIX4B = [[2, 0, 1, 1, 1, 1], [0, 2, 1, 1, 1, 1], [1, 1, 1, 2, 0, 2],
           [1, 0, 0, 2, 0, 1], [1, 1, 1, 0, 2, 0], [0, 1, 0, 1, 0, 2]]
M_PLUS = [[3, 0, 0, 0, 0, 0], [0, 3, 0, 0, 0, 0], [1, 1, 1, 0, 0, 0],
          [1, 1, 0, 1, 0, 0], [1, 1, 0, 0, 1, 0], [1, 1, 0, 0, 0, 1]]
REDUCED_PLUS = [[3, 0, 0, 0], [0, 3, 0, 0], [2, 2, 1, 0], [2, 2, 0, 1]]
REDUCED_START4 = [[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 3, 0], [2, 2, 2, 2]]

M_W2 = [[8, 4, 3, 9, 3, 9], [2, 6, 5, 5, 5, 5], [4, 6, 7, 5, 6, 5],
        [5, 4, 5, 7, 5, 6], [4, 2, 1, 3, 2, 3], [5, 6, 3, 7, 3, 8]]
W2_LENGTHS = [36, 28, 33, 32, 15, 32]
Q1 = [
    [[2, 0, 0, 1, 1, 0], [0, 1, 1, 1, 0, 0], [0, 0, 2, 0, 1, 0],
     [1, 0, 1, 2, 0, 0], [1, 0, 0, 0, 1, 0], [1, 1, 0, 0, 1, 0]],
    [[0, 0, 1, 0, 0, 1], [0, 1, 0, 0, 1, 1], [0, 1, 1, 0, 1, 0],
     [0, 1, 0, 0, 1, 1], [0, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 1]],
]

# right exit to bottom exit of the 16 x 16 set, as (col, row)
W2_D_PATH = [(15, 6), (15, 7), (14, 7), (14, 8), (14, 9), (13, 9), (13, 10), (12, 10), (11, 10),
             (11, 9), (10, 9), (9, 9), (9, 10), (8, 10), (7, 10), (7, 9), (6, 9), (6, 8), (6, 7),
             (5, 7), (5, 6), (4, 6), (3, 6), (3, 5), (2, 5), (2, 4), (2, 3), (3, 3), (3, 2),
             (3, 1), (2, 1), (2, 0)]

ADV4A = ["...#", "#.#.", "....", "#.##"]
ADV4B = ["..##", "#...", "..#.", "#..#"]

# growth of the self-similar start4 plan at c*: first level where min v_n > 10,
# and first level where the lower-bound product exceeds 10
START4_V_EXCEEDS_10 = 11
START4_BOUND_EXCEEDS_10 = 20
