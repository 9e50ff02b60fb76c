"""Published reference numbers that the benchmark runners are compared against.

Timing values were measured in Matlab on an Intel Core i7-7700 and are
carried for context only.
"""

# dataset -> (bilinear, bilinear + refine, bicubic, bicubic + refine) PSNR,
# nearest-neighbour downsampled inputs
PUBLISHED_TABLE1 = {
    "Set5": (28.86, 30.43, 28.64, 29.73),
    "Set14": (26.55, 27.50, 26.23, 26.85),
    "BSD100": (26.44, 26.89, 26.02, 26.16),
    "Urban100": (23.57, 24.12, 23.17, 23.45),
}

# (kernel, scale) -> {method: (psnr, ssim, time_s)}, averaged over Set5
PUBLISHED_TABLE3 = {
    ("bilinear", 2): {"independent": (30.42, 0.9566, 0.0013), "correlated": (32.00, 0.9673, 0.0062)},
    ("bilinear", 3): {"independent": (27.78, 0.9274, 0.0012), "correlated": (28.55, 0.9368, 0.0052)},
    ("bilinear", 4): {"independent": (25.84, 0.8966, 0.0011), "correlated": (26.82, 0.9096, 0.0056)},
    ("bicubic", 2): {"independent": (31.81, 0.9657, 0.0020), "correlated": (32.37, 0.9694, 0.0075)},
    ("bicubic", 3): {"independent": (28.63, 0.9365, 0.0019), "correlated": (29.07, 0.9413, 0.0065)},
    ("bicubic", 4): {"independent": (26.70, 0.9087, 0.0018), "correlated": (27.13, 0.9139, 0.0068)},
    ("lanczos", 2): {"independent": (32.43, 0.9687, 0.0020), "correlated": (32.74, 0.9706, 0.0074)},
    ("lanczos", 3): {"independent": (29.05, 0.9402, 0.0018), "correlated": (29.29, 0.9427, 0.0063)},
    ("lanczos", 4): {"independent": (27.07, 0.9129, 0.0017), "correlated": (27.33, 0.9157, 0.0067)},
}

# (dataset, scale) -> {"GR": (psnr, time_s), "ours": (psnr, time_s)}; Lanczos kernel
PUBLISHED_TABLE4 = {
    ("Set5", 2): {"GR": (33.04, 0.34), "ours": (32.74, 0.0074)},
    ("Set5", 3): {"GR": (29.50, 0.22), "ours": (29.29, 0.0063)},
    ("Set5", 4): {"GR": (27.49, 0.19), "ours": (27.33, 0.0067)},
    ("Set14", 2): {"GR": (29.85, 0.67), "ours": (29.62, 0.0138)},
    ("Set14", 3): {"GR": (26.92, 0.46), "ours": (26.75, 0.0133)},
    ("Set14", 4): {"GR": (25.21, 0.38), "ours": (25.08, 0.0124)},
    ("BSD100", 2): {"GR": (28.90, 0.45), "ours": (28.97, 0.0073)},
    ("BSD100", 3): {"GR": (26.38, 0.32), "ours": (26.30, 0.0070)},
    ("BSD100", 4): {"GR": (25.03, 0.26), "ours": (24.97, 0.0070)},
    ("Urban100", 2): {"GR": (26.30, 2.31), "ours": (26.20, 0.0480)},
    ("Urban100", 3): {"GR": (23.69, 1.46), "ours": (23.50, 0.0427)},
    ("Urban100", 4): {"GR": (22.28, 1.24), "ours": (22.08, 0.0428)},
}

BENCHMARK_DATASETS = ("Set5", "Set14", "BSD100", "Urban100")
