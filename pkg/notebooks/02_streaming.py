# %% [markdown]
# # Streaming
#
# The streaming builder sees each point once and keeps only delegates.
# In epsilon mode, new centers must sit more than 2·eps·R/(c·k) from every
# existing one, where R tracks the diameter.  The constant c = 32 is what the
# invariants need; it also makes the coreset large in more than one dimension.

# %%
import numpy as np

from divmax import Dataset, StreamState, TransversalMatroid, diameter

rng = np.random.default_rng(3)
vecs = rng.normal(size=(2000, 2))
names = [f"t{j}" for j in range(6)]
cats = [rng.choice(names, size=2, replace=False).tolist() for _ in range(2000)]
d = Dataset.from_arrays(vecs, cats)
m = TransversalMatroid(names)
print(f"diameter {diameter(d):.3f}")


def feed(**mode):
    st = StreamState(m, 2, metric=d.metric, **mode)
    st.start(d.points[0], d.points[1])
    for i, p in enumerate(d.points[2:], start=3):
        st.push(p)
        if i in (100, 2000):
            print(f"  after {i:4d} points: R={st.R:.3f}, centers={len(st.centers)}")
    return st.finalize()


# %%
for c in (32, 4, 1):
    print(f"eps=0.9, c={c}")
    res = feed(epsilon=0.9, c=c)
    print(f"  coreset size {sum(len(g) for g in res.delegates)}")

# %% [markdown]
# Tau mode caps the center count instead.  A point opens a new center only
# when it is more than 2R from all of them, and R starts at the distance
# between the first two points.  On compact data that already covers most of
# the space, so the count can stay far below tau; overflow doubles R.

# %%
for tau in (16, 64):
    print(f"tau={tau}")
    res = feed(tau=tau)
    print(f"  covering radius bound {res.radius_bound:.3f}")
