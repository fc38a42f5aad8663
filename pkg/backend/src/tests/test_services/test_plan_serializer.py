"""
Plan Serialization Tests
"""

import json
from fractions import Fraction

import pytest

from app.core.exceptions import PlanFormatError
from app.models.plan import format_coefficient, parse_coefficient
from app.services.plan_serializer import dumps_plan, load_plan, loads_plan, save_plan


@pytest.fixture
def plan_json(seven_state_plan) -> dict:
    return json.loads(dumps_plan(seven_state_plan, seed=3))


class TestCoefficients:
    @pytest.mark.parametrize(
        "value,text",
        [(Fraction(2), "2"), (Fraction(-1, 2), "-1/2^1"), (Fraction(3, 4), "3/2^2"), (Fraction(1, 3), "1/3")],
    )
    def test_format(self, value, text):
        assert format_coefficient(value) == text
        assert parse_coefficient(text) == value

    def test_parse_plain_fraction(self):
        assert parse_coefficient(" 5/10 ") == Fraction(1, 2)


class TestPlanDocument:
    """JSON plan files with recomputed mixers and costs"""

    def test_round_trip(self, seven_state_plan):
        loaded = loads_plan(dumps_plan(seven_state_plan))
        assert loaded.feasible == seven_state_plan.feasible
        assert loaded.total_cost == seven_state_plan.total_cost
        for original, restored in zip(seven_state_plan.candidates, loaded.candidates):
            assert restored.mixer == original.mixer
            assert restored.edges == original.edges
            assert restored.provenance == original.provenance

    def test_document_fields(self, seven_state_plan, plan_json):
        assert plan_json["seed"] == 3
        assert plan_json["n"] == 4
        assert plan_json["candidate_count"] == len(seven_state_plan.candidates)
        assert plan_json["feasible"][0] == "1010"

    def test_file_round_trip(self, one_hot_plan, tmp_path):
        path = save_plan(one_hot_plan, tmp_path / "plans" / "one_hot.json")
        assert load_plan(path).total_cost == one_hot_plan.total_cost

    def test_tampered_candidate_cost(self, plan_json):
        plan_json["candidates"][0]["cost"] += 2
        plan_json["total_cost"] += 2
        with pytest.raises(PlanFormatError):
            loads_plan(json.dumps(plan_json))

    def test_tampered_total_cost(self, plan_json):
        plan_json["total_cost"] += 1
        with pytest.raises(PlanFormatError):
            loads_plan(json.dumps(plan_json))

    def test_edge_outside_feasible_set(self, plan_json):
        plan_json["candidates"][0]["edges"].append(["1111", "0000"])
        with pytest.raises(PlanFormatError):
            loads_plan(json.dumps(plan_json))

    def test_logical_x_must_be_x_type(self, plan_json):
        plan_json["candidates"][0]["logical_x"] = "XZII"
        with pytest.raises(PlanFormatError):
            loads_plan(json.dumps(plan_json))

    def test_bad_coefficient(self, plan_json):
        plan_json["candidates"][0]["projector"][0]["coefficient"] = "one half"
        with pytest.raises(PlanFormatError):
            loads_plan(json.dumps(plan_json))

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(PlanFormatError):
            load_plan(path)
