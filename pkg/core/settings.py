# Solver defaults, overridden by the CDSAT dict in the project settings

# Step bound of a single solver run
MAX_STEPS = 20000

# none | proof-terms | lcf
PROOF_MODE = "proof-terms"

# Theory modules, polled Bool, EUF, LRA, then black-box adapters
MODULES = ["Bool", "EUF", "LRA"]

# Re-check every inference, level laws and repeated states while solving
DEBUG_CHECKS = False

# Worker threads of the bench command
BENCH_WORKERS = 4

# Generator family parameters
GENERATOR_CONFIG = None
