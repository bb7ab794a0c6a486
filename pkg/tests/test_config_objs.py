import math

import pydantic
import pytest

from bipolar_blowup.objs.config_objs import (
    ConductivityConfig,
    GeometryConfig,
    GridConfig,
    RunConfig,
    eps_schedule,
    parse_number,
)
from bipolar_blowup.objs.field_objs import BoundaryKind


@pytest.mark.parametrize("raw,expected", [("1/3200", 1.0 / 3200.0), (" 0.25 ", 0.25), (3, 3.0), ("2", 2.0)])
def test_parse_number(raw, expected):
    assert parse_number(raw) == expected


@pytest.mark.parametrize("raw", ["one", "1/0", True, None, [1]])
def test_parse_number_rejects(raw):
    with pytest.raises(ValueError):
        parse_number(raw)


def test_schedules():
    assert [eps_schedule("wide", n) for n in (1, 2, 3)] == [1 / 50, 1 / 3200, 1 / 204800]
    assert [eps_schedule("narrow", n) for n in (1, 2)] == [1 / 3200, 1 / 204800]
    with pytest.raises(ValueError):
        eps_schedule("fig9", 1)


def test_defaults():
    config = RunConfig()
    assert config.task == "validate"
    assert config.schedule() == [(1.0 / 50.0, 2.0)]
    assert config.boundary_data.kind is BoundaryKind.DIRICHLET


def test_rules():
    eps_list = [1.0 / 50.0, 1.0 / 3200.0, 1.0 / 204800.0]
    dirichlet = ConductivityConfig(rule="k2eps=2/25")
    assert dirichlet.resolve(eps_list) == pytest.approx([2.0, 16.0, 128.0])
    neumann = ConductivityConfig(rule="k2overEps=2")
    assert neumann.resolve([1.0 / 3200.0, 1.0 / 204800.0]) == pytest.approx([1.0 / 40.0, 1.0 / 320.0])


@pytest.mark.parametrize("rule", ["k2eps=0", "k2eps=-1", "keps=2", "k2overEps=abc"])
def test_bad_rules(rule):
    with pytest.raises(pydantic.ValidationError):
        ConductivityConfig(rule=rule)


def test_only_one_conductivity_source():
    with pytest.raises(pydantic.ValidationError):
        ConductivityConfig(k=2.0, rule="k2eps=1")
    with pytest.raises(pydantic.ValidationError):
        ConductivityConfig(k=0.0)


def test_geometry_validation():
    assert GeometryConfig(eps_list=["1/50", "1/3200"]).epsilons() == [1 / 50, 1 / 3200]
    with pytest.raises(pydantic.ValidationError):
        GeometryConfig(eps=3.0)
    with pytest.raises(pydantic.ValidationError):
        GeometryConfig(r_i=5.0, r_e=2.0)
    with pytest.raises(pydantic.ValidationError):
        GeometryConfig(eps_list=[])


def test_schedule_lengths_must_match():
    with pytest.raises(pydantic.ValidationError):
        RunConfig.parse_obj({"geometry": {"eps_list": [0.1, 0.01]}, "conductivity": {"k_list": [2.0]}})
    config = RunConfig.parse_obj({"geometry": {"eps_list": [0.1, 0.01]}, "conductivity": {"k_list": [2.0, "1/2"]}})
    assert config.schedule() == [(0.1, 2.0), (0.01, 0.5)]


def test_grid_resolution():
    with pytest.raises(pydantic.ValidationError):
        GridConfig(grid_size=0)
    assert math.isclose(GridConfig().points[0][0], 0.01)
