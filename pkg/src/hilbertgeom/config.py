"""Configuration management for hilbertgeom."""

import os

from dotenv import load_dotenv

load_dotenv()

# Sampling
SEED = int(os.getenv("HILBERT_SEED", "0"))
PAIRS = int(os.getenv("HILBERT_PAIRS", "500"))
LINES_PER_POLE = int(os.getenv("HILBERT_LINES_PER_POLE", "8"))
SAMPLES_PER_LINE = int(os.getenv("HILBERT_SAMPLES_PER_LINE", "7"))
# Fraction of the domain diameter kept clear of the boundary when sampling
SAMPLE_MARGIN = float(os.getenv("HILBERT_SAMPLE_MARGIN", "0.05"))

# Numeric tolerances (chart units for unit-diameter domains)
EPS = float(os.getenv("HILBERT_EPS", "1e-13"))
COLLINEAR_TOL = float(os.getenv("HILBERT_COLLINEAR_TOL", "1e-9"))
BOUNDARY_TOL = float(os.getenv("HILBERT_BOUNDARY_TOL", "1e-10"))
SINGULAR_TOL = float(os.getenv("HILBERT_SINGULAR_TOL", "1e-12"))

# Verdict thresholds
TOL_ISOMETRY = float(os.getenv("HILBERT_TOL_ISOMETRY", "1e-7"))
TOL_RESIDUAL = float(os.getenv("HILBERT_TOL_RESIDUAL", "1e-7"))
TOL_COLLINEATION = float(os.getenv("HILBERT_TOL_COLLINEATION", "1e-7"))

# Iteration counts
CHORD_BISECTION_STEPS = 80
BALL_BISECTION_STEPS = 60
LINE_MINIMIZE_STEPS = 120

LOG_LEVEL = os.getenv("HILBERT_LOG_LEVEL", "warning")
