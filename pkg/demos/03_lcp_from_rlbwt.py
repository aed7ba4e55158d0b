"""LCP array of a repetitive text computed from its run-length BWT alone."""
import numpy as np

from movestruct.lcp import irreducible_plcp, lcp_array
from movestruct.oracle import naive_suffix_structures, repetitive_text
from movestruct.rlbwt import Rlbwt, build_context, format_text

# --- banana ---
ss = naive_suffix_structures("banana$")
rl = Rlbwt.from_bwt(ss.BWT)
print(format_text(rl), end="")

ctx = build_context(rl)
print("irreducible positions", ctx.I)
print("phi at those positions", ctx.phi_plus)

pp = irreducible_plcp(rl)
print("PLCP+", pp.values)
print("PLCP ", pp.expand().tolist())
print("LCP  ", lcp_array(rl).tolist())

# --- something longer ---
rng = np.random.default_rng(3)
text = repetitive_text(rng, 20_000, 4, mutation=0.005)
ss = naive_suffix_structures(text)
rl = Rlbwt.from_bwt(ss.BWT)
print(f"n={rl.n} r={rl.r} n/r={rl.n / rl.r:.1f}")

pp = irreducible_plcp(rl)
print("symbol comparisons / n:", pp.stats.comparisons / rl.n)
print("FL steps / n:", pp.stats.fl_steps / rl.n)
lcp = lcp_array(rl)
assert np.array_equal(lcp, ss.LCP)
print("max LCP", lcp.max(), "mean", round(float(lcp.mean()), 1))
