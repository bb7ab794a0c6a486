from typing import Dict, Type

from pydantic import BaseModel

from . import mixins


class TaskRoutingObj(BaseModel):
    handler_name: str


TASK_ROUTING_MAP: Dict[str, TaskRoutingObj] = {}


def task_name(handler_name: str) -> str:
    """
    run_boundary_profile -> boundary-profile
    """
    return handler_name[len("run_"):].replace("_", "-")


def fill_routing_map(routing_map: Dict[str, TaskRoutingObj], task_mixin: Type[mixins.BaseTaskMixin]) -> None:
    for attr, value in dict(task_mixin.__dict__).items():
        if not attr.startswith("run_") or not callable(value):
            continue
        routing_map[task_name(attr)] = TaskRoutingObj(handler_name=attr)


def fill_task_routing_map() -> None:
    for task_mixin in (mixins.SolveTasksMixin, mixins.ProfileTasksMixin, mixins.SweepTasksMixin):
        fill_routing_map(routing_map=TASK_ROUTING_MAP, task_mixin=task_mixin)


fill_task_routing_map()
