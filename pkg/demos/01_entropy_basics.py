"""
Entropy of a die, fair and loaded
=================================

Entropy depends only on the outcome probabilities. More equally likely
outcomes mean more uncertainty, and a loaded die is less uncertain than a
fair one.
"""

# %%
import math

from entropylab import RationalDist, RealDist, entropy, uniform, uniform_entropy

# %%
# A fair coin carries one bit; a fair six-sided die about 2.585 bits.
print(f"coin {entropy(uniform(2)):.6f} bits")
print(f"die  {entropy(uniform(6)):.6f} bits, log2 6 = {uniform_entropy(6):.6f}")

# %%
# A die that lands on 6 half the time.
loaded = RealDist((0.1, 0.1, 0.1, 0.1, 0.1, 0.5))
print(f"loaded die: {entropy(loaded):.6f} bits, fair die: {uniform_entropy(6):.6f} bits")

# %%
# Dice with more faces are harder to predict.
for sides in (1, 2, 4, 6, 8, 12, 20):
    print(f"{sides:>3} sides  {uniform_entropy(sides):.4f} bits")

# %%
# Counts are exact: 3 oranges among 10 fruit is probability 3/10, not 0.3.
fruit = RationalDist((3, 7), labels=("orange", "apple"))
print(fruit.probabilities)
print(f"{entropy(fruit):.6f} bits")

# %%
# Outcomes that never happen add nothing, and the base only rescales.
print(entropy(RationalDist((3, 7, 0, 0))) == entropy(fruit))
print(entropy(fruit, math.e) / entropy(fruit, 2), math.log(2))
