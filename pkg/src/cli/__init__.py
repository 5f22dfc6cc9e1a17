from .experiment import cmd_run_experiment, process_shape, reproduction_summary
from .stages import STAGES
