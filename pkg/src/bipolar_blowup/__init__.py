from . import mixins
from .objs import asymptotic_objs, config_objs, field_objs, geometry_objs, report_objs, task_objs
from .logger import logger, log_errors
from .errors import BlowupError, ConfigError, DomainError, PoleError, SingularPointError, SolverError
from .harness import Harness, load_config, main
from .utils import in_separate_thread
