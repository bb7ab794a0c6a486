from . import asymptotic_objs
from . import config_objs
from . import field_objs
from . import geometry_objs
from . import report_objs
from . import task_objs
