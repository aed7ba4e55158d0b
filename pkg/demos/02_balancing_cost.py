"""How many intervals balancing adds, and how long it takes, as alpha varies."""
import time

import numpy as np

from movestruct import balance, intervals_from_permutation
from movestruct.oracle import naive_move_structure, random_interval_map

rng = np.random.default_rng(1)
r = 20_000
imap = random_interval_map(rng, 50 * r, r)

print("alpha  r'/r    bound   steps/r  seconds")
for alpha in (2, 4, 8, 16):
    t0 = time.perf_counter()
    pair = balance(imap, alpha)
    dt = time.perf_counter() - t0
    st = pair.stats
    bound = (alpha + 1) / (alpha - 1)
    print(f"{alpha:5d}  {st.r_prime / r:.4f}  {bound:.4f}  {st.total_steps / r:7.2f}  {dt:.3f}")

# A worst case for the query scan without balancing: one block swallowing
# a long reversed tail.
n = 4000
pi = list(range(n // 2, n)) + list(range(n // 2 - 1, -1, -1))
imap = intervals_from_permutation(pi)
raw = naive_move_structure(imap, 4)
ms = balance(imap, 4).extract_forward()
print("longest scan before balancing:", raw.max_scan())
print("longest scan after balancing: ", ms.max_scan())
