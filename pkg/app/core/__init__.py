"""
Core modules: config, errors and the worker pool; partitions, exact algebra,
finite-field counts, graded series, spectral windows, the brute-force oracle
and the report builders on top of them.
"""
