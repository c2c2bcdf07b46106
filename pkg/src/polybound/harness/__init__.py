from .experiments import (d4_ball_experiment, random_body_trends, scaling_fit, scaling_report,
                          stress_crosscheck, verify_qlbt, witness_strips)
from .report import THETA_2, ExperimentReport, ScalingSeries, fit_loglog
