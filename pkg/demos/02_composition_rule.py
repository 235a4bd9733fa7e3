"""
A coin that picks a die
=======================

A fair coin decides which of two fair dice gets rolled. The uncertainty of
the whole operation is the coin's entropy (reached with probability 1) plus
each die's entropy weighted by the probability that it is rolled. Flattening
the tree into one experiment over all 12 (coin, face) paths gives the same
number.
"""

# %%
from entropylab import Branch, Leaf, entropy, flatten, total_uncertainty, uniform
from entropylab.composition import format_path

# %%
die = Leaf(uniform(6))
coin_then_die = Branch(((0.5, die), (0.5, die)))

breakdown = total_uncertainty(coin_then_die)
for node in breakdown.nodes:
    print(f"{format_path(node.path):<8} p={node.path_prob:.2f}  H={node.local_entropy:.6f}")
print("total:", breakdown.total)

# %%
flat = flatten(coin_then_die)
print(f"{len(flat)} outcomes, entropy {entropy(flat):.6f}")

# %%
# An unfair selector between a coin and a die, one level deeper.
nested = Branch((
    (0.2, Leaf(uniform(2))),
    (0.8, Branch(((0.9, die), (0.1, Leaf(uniform(20)))))),
))
print(f"{total_uncertainty(nested).total:.12f}  {entropy(flatten(nested)):.12f}")

# %%
# The same trees can be written as text and run through
# ``entropylab compose``.
from entropylab.cli_io import format_tree

print(format_tree(nested))
