# %% [markdown]
# # Benchmark sweep
#
# The same experiment the `bench` subcommand runs, driven from Python.
# Larger tau gives a finer clustering, so the diversity found should rise
# while the coreset grows.

# %%
from divmax import Dataset, MetricKind
from divmax.harness import RunConfig, bench, format_table
from divmax.io import SynthSpec, generate

points, m = generate(SynthSpec(n=30_000, dim=16, clusters=40, categories=16, rank=89, seed=0))
d = Dataset(tuple(points), MetricKind.ANGULAR_COSINE)

# %%
result = bench(RunConfig(k=8, repetitions=3), d, m, taus=(8, 16, 32, 64, 128), ells=(1, 2, 4))
print(format_table(result))
# With only three repetitions, neighbouring small tau values can swap
# order; the trend over the whole grid is what matters.
print("monotone:", result["monotone_diversity"], "| parallel not slower:", result["parallel_not_slower"])
