"""The two worked scheduling examples, as max-plus data."""

from tropopt import MAX_PLUS, Matrix, vector

Z = None
SF = MAX_PLUS

WINDOW_A = Matrix(SF, [[2, 4, Z], [2, 2, 1], [0, -1, 1]])
WINDOW_P = vector(SF, [3, 3, 3])
WINDOW_Q = vector(SF, [1, 1, 1])
# q' with q'^- = q^- A, and c = q^- p, as the window reduction produces them
WINDOW_Q_REDUCED = vector(SF, [-1, -3, 0])
WINDOW_C = 2

CON_A = Matrix(SF, [[4, 0, Z], [2, 3, 1], [1, 1, 3]])
CON_B = Matrix(SF, [[Z, -2, 1], [0, Z, 2], [-1, Z, Z]])
CON_P = vector(SF, [6, 6, 6])
CON_G = vector(SF, [1, 2, 3])


def m(rows):
    return Matrix(SF, rows)


def v(values):
    return vector(SF, values)
