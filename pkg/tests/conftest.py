import os
import warnings

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# SLSQP reports benign floating-point noise while probing infeasible starts.
warnings.filterwarnings("ignore", category=RuntimeWarning, module="scipy")
