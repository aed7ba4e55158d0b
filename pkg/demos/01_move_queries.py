"""Build a move structure for a small permutation and step along it."""
import numpy as np

from movestruct import balance, intervals_from_permutation
from movestruct.oracle import expand_interval_map


# --- A permutation made of a few rigid blocks ---
pi = [6, 7, 8, 9, 10, 11, 5, 4, 3, 2, 1, 0]
imap = intervals_from_permutation(pi)
print("input starts   ", imap.P)
print("mapped starts  ", imap.P_pi)

# The first block [0,6) lands on [6,12), which holds five input starts.
# With alpha=2 that output interval is heavy (5 >= 4), so one split is made.
pair = balance(imap, alpha=2)
ms = pair.extract_forward()
print("balanced starts", ms.P)
print("balanced images", ms.P_pi)
print("insertions     ", pair.stats.insertions)

# --- Queries ---
# move(i, j) needs the interval j holding i and returns pi(i) with its interval.
i, j = 4, ms.locate(4)
print("move(4, %d) ->" % j, ms.move(i, j))

orbit = [pos for pos, _ in ms.iterate(0, 0, 12)]
print("orbit of 0     ", orbit)
assert np.array_equal(ms.to_permutation(), expand_interval_map(imap))

# The inverse comes out of the same balancing run.
inv = pair.extract_inverse()
y, k = ms.move(i, j)
print("inverse query  ", inv.move(y, inv.locate(y)))
