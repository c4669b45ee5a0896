# %% [markdown]
# # Quickstart
#
# Pick k points that are far apart, subject to a partition matroid: at most
# a fixed number of points may come from each category.  Instead of searching
# all points we shrink them to a small coreset first, then search the coreset.

# %%
import numpy as np

from divmax import Dataset, MetricKind, PartitionMatroid, exhaustive_search, seq_coreset
from divmax.oracle import brute_force_optimum

rng = np.random.default_rng(0)
centers = rng.uniform(-1, 1, size=(5, 2))
vecs = centers[rng.integers(5, size=36)] + 0.04 * rng.normal(size=(36, 2))
cats = [f"g{c}" for c in rng.integers(3, size=36)]
d = Dataset.from_arrays(vecs, cats, metric=MetricKind.EUCLIDEAN)
m = PartitionMatroid({"g0": 1, "g1": 2, "g2": 1})
k = 3

# %% [markdown]
# Five tight blobs, so five clusters already describe the data well.

# %%
core = seq_coreset(d, m, k, tau=5)
print(f"coreset: {len(core)} of {len(d)} points, radius {core.radius:.4f}")

# %% [markdown]
# Compare the best star diversity on the coreset with the best over everything.

# %%
on_core = exhaustive_search(d, m, core.ids, k, "star")
_, best = brute_force_optimum(d, m, k, "star")
print(f"coreset optimum {on_core.value:.4f}, full optimum {best:.4f}, ratio {on_core.value / best:.4f}")
