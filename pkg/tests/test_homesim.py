import json
import random
import tracemalloc

import pytest

from conftest import MALFORMED, RULES, SCENARIOS
from crossdep.errors import BadSlot, MalformedInput, ScenarioInvalid
from crossdep.homesim import (
    Device,
    HistoryInterval,
    OccupancyInterval,
    Scenario,
    ScheduleInterval,
    SimParams,
    load_scenario,
    predicted_occupied,
    report_to_dict,
    report_to_json,
    report_to_text,
    run,
    scenario_from_dict,
    train,
)
from crossdep.ruledsl import parse_rules
from crossdep.utils import read_text_file
from crossdep.world import EventSource, Mode

STANDBY_RULES = parse_rules(read_text_file(RULES / "standby_shutdown.rules"))
POWER = {Mode.off: 0.0, Mode.standby: 5.0, Mode.on: 100.0}


def _scenario(name):
    path = SCENARIOS / name
    return load_scenario(read_text_file(path), str(path))


def _kitchen_every_morning():
    return [HistoryInterval(day, "kitchen", 420, 480) for day in (0, 1)]


def _brute_force_frequency(history, slot_minutes, days):
    occupied = {}
    for interval in history:
        minutes = occupied.setdefault(interval.room, set())
        minutes.update((interval.day, minute) for minute in range(interval.start_min, interval.end_min))
    frequency = {}
    for room, minutes in occupied.items():
        frequency[room] = [
            sum(1 for day in range(days) for minute in range(slot * slot_minutes, (slot + 1) * slot_minutes)
                if (day, minute) in minutes) / (slot_minutes * days)
            for slot in range(1440 // slot_minutes)
        ]
    return frequency


def test_empty_history_gives_zero_frequency():
    model = train([], 30)
    assert model.frequency("kitchen", 14) == 0.0
    assert not model.predicted_occupied("kitchen", 0, 1440)


def test_train_counts_occupied_minutes_per_slot():
    model = train(_kitchen_every_morning(), 30)
    assert model.frequency("kitchen", 14) == 1.0
    assert model.frequency("kitchen", 26) == 0.0


def test_train_over_two_days_with_one_visit():
    assert train([HistoryInterval(1, "kitchen", 420, 435)], 30).frequency("kitchen", 14) == 0.25
    assert train([HistoryInterval(0, "kitchen", 420, 435)], 30, days=2).frequency("kitchen", 14) == 0.25
    with pytest.raises(ValueError):
        train([HistoryInterval(3, "kitchen", 420, 435)], 30, days=2)


def test_train_memory_follows_the_days_seen_not_the_day_index():
    tracemalloc.start()
    try:
        model = train([HistoryInterval(100000, "kitchen", 420, 435)], 30)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert model.frequency("kitchen", 14) == pytest.approx(15 / (30 * 100001))
    assert model.frequency("kitchen", 15) == 0.0
    assert peak < 10 * 1024 * 1024


@pytest.mark.parametrize("slot_minutes", [0, 7, 1441, -30])
def test_train_rejects_slots_that_do_not_divide_a_day(slot_minutes):
    with pytest.raises(BadSlot):
        train([], slot_minutes)


def test_train_matches_a_minute_by_minute_count():
    rng = random.Random(1234)
    for _ in range(24):
        slot_minutes = rng.choice([15, 30, 60, 90, 120])
        rooms = ["kitchen", "bedroom", "hallway"][:rng.randint(1, 3)]
        history = []
        for _ in range(rng.randint(1, 12)):
            start = rng.randrange(0, 1439)
            history.append(HistoryInterval(rng.randrange(0, 7), rng.choice(rooms), start, rng.randint(start + 1, 1440)))
        model = train(history, slot_minutes)
        days = max(interval.day for interval in history) + 1
        expected = _brute_force_frequency(history, slot_minutes, days)
        assert sorted(model.freq) == sorted(expected)
        for room, frequencies in expected.items():
            for slot, value in enumerate(frequencies):
                assert abs(model.frequency(room, slot) - value) <= 1e-12


def test_predicted_occupied_looks_ahead_over_the_horizon():
    model = train(_kitchen_every_morning(), 30, 0.2)
    assert predicted_occupied(model, "kitchen", 410, 60)
    assert not predicted_occupied(model, "kitchen", 780, 60)
    assert not predicted_occupied(model, "garage", 410, 60)
    # The same minute of the next day.
    assert predicted_occupied(model, "kitchen", 1440 + 410, 60)


def test_predicted_occupied_wraps_at_midnight():
    model = train([HistoryInterval(0, "bedroom", 0, 30)], 30)
    assert predicted_occupied(model, "bedroom", 1430, 20)
    assert not predicted_occupied(model, "bedroom", 1380, 60)


def test_zero_threshold_predicts_every_known_room():
    model = train([HistoryInterval(0, "kitchen", 0, 1)], 30, threshold=0.0)
    assert predicted_occupied(model, "kitchen", 700, 1)
    assert not predicted_occupied(model, "garage", 700, 1)


def test_predicted_occupied_rejects_non_positive_horizons():
    with pytest.raises(ValueError):
        predicted_occupied(train([], 30), "kitchen", 0, 0)


def test_predicted_occupied_is_monotone_in_the_horizon():
    rng = random.Random(99)
    history = [HistoryInterval(rng.randrange(3), "kitchen", start, start + rng.randint(1, 120))
               for start in (rng.randrange(0, 1300) for _ in range(6))]
    model = train(history, 30, 0.3)
    for _ in range(200):
        t, horizon = rng.randrange(0, 2880), rng.randint(1, 300)
        if predicted_occupied(model, "kitchen", t, horizon):
            assert predicted_occupied(model, "kitchen", t, horizon + rng.randint(0, 300))


def test_standby_overnight_saves_forty_watt_hours():
    report = run(_scenario("standby_overnight.json"), STANDBY_RULES, SimParams(30, 0.2))
    assert report.baseline_wh == pytest.approx(40.0)
    assert report.controlled_wh == 0.0
    assert report.savings_wh == pytest.approx(40.0, abs=1e-3)
    assert [(event.time_min, event.source_label, event.device_id, event.new_mode) for event in report.events] == [
        (0, "rule:standby_shutdown", "tv", Mode.off)]


@pytest.mark.parametrize("name", ["standby_overnight_occupied.json", "standby_overnight_habitual.json"])
def test_presence_or_habit_keeps_the_device_in_standby(name):
    report = run(_scenario(name), STANDBY_RULES)
    assert report.events == []
    assert report.savings_wh == 0.0


def test_no_rules_means_no_savings():
    report = run(_scenario("evening_household.json"), [])
    assert report.controlled_wh == report.baseline_wh
    assert report.savings_wh == 0.0
    assert all(event.source is EventSource.Schedule for event in report.events)


def test_schedule_wins_at_its_own_boundaries():
    device = Device("tv", "livingroom", POWER, Mode.standby, (ScheduleInterval(10, 20, Mode.on),))
    scenario = Scenario("evening", 30, ("livingroom",), (device,))
    report = run(scenario, STANDBY_RULES)
    assert [(event.time_min, event.source_label, event.new_mode) for event in report.events] == [
        (0, "rule:standby_shutdown", Mode.off),
        (10, "schedule", Mode.on),
        (20, "schedule", Mode.standby),
        (20, "rule:standby_shutdown", Mode.off),
    ]
    assert report.per_device["tv"].baseline_wh == pytest.approx(1100.0 / 60.0)
    assert report.per_device["tv"].controlled_wh == pytest.approx(1000.0 / 60.0)
    assert report.savings_wh == pytest.approx(100.0 / 60.0)


def test_occupancy_change_fires_when_the_room_starts_occupied():
    rules = parse_rules("rule wake:\n  on occupancy_change\n  when occupied(device.room)\n  then set device.mode = on\n")
    device = Device("lamp", "hallway", POWER, Mode.off)
    scenario = Scenario("arrival", 60, ("hallway",), (device,),
                        occupancy_trace=(OccupancyInterval("hallway", 0, 10), OccupancyInterval("hallway", 30, 40)))
    report = run(scenario, rules)
    assert [(event.time_min, event.new_mode) for event in report.events] == [(0, Mode.on)]


def test_horizon_override_changes_the_outcome():
    device = Device("tv", "livingroom", POWER, Mode.standby)
    history = (HistoryInterval(0, "livingroom", 45, 90),)
    scenario = Scenario("late_return", 30, ("livingroom",), (device,), history=history)
    assert run(scenario, STANDBY_RULES).events == []
    report = run(scenario, STANDBY_RULES, SimParams(horizon_override=30))
    assert [(event.time_min, event.new_mode) for event in report.events] == [(0, Mode.off)]


def test_household_scenario_properties():
    report = run(_scenario("evening_household.json"), STANDBY_RULES)
    assert report.savings_wh > 0
    assert sorted(report.per_device) == ["bedroom_lamp", "coffee_machine", "tv"]
    assert report.savings_wh == pytest.approx(sum(energy.savings_wh for energy in report.per_device.values()))
    times = [event.time_min for event in report.events]
    assert times == sorted(times)
    for event in report.events:
        if event.source is EventSource.Rule:
            assert event.new_mode is Mode.off


def _random_scenario(rng, number):
    rooms = ["r{0}".format(index) for index in range(rng.randint(1, 3))]
    duration = rng.randint(1, 600)
    devices = []
    for index in range(rng.randint(1, 4)):
        off = rng.choice([0.0, 0.5])
        standby = off + rng.uniform(0, 10)
        power = {Mode.off: off, Mode.standby: standby, Mode.on: standby + rng.uniform(0, 500)}
        schedule, cursor = [], 0
        while cursor < duration - 1 and rng.random() < 0.6:
            start = rng.randint(cursor, duration - 1)
            end = rng.randint(start + 1, duration)
            schedule.append(ScheduleInterval(start, end, rng.choice(list(Mode))))
            cursor = end
        devices.append(Device("d{0}".format(index), rng.choice(rooms), power, rng.choice(list(Mode)), tuple(schedule)))
    trace = []
    for _ in range(rng.randint(0, 4)):
        start = rng.randint(0, duration - 1)
        trace.append(OccupancyInterval(rng.choice(rooms), start, rng.randint(start + 1, duration)))
    history = []
    for _ in range(rng.randint(0, 4)):
        start = rng.randint(0, 1439)
        history.append(HistoryInterval(rng.randint(0, 3), rng.choice(rooms), start, rng.randint(start + 1, 1440)))
    return Scenario("random_{0}".format(number), duration, tuple(rooms), tuple(devices), tuple(trace), tuple(history))


def test_shutdown_rules_never_cost_energy():
    rng = random.Random(42)
    for number in range(100):
        scenario = _random_scenario(rng, number)
        params = SimParams(rng.choice([15, 30, 60]), rng.choice([0.0, 0.2, 0.5, 1.0]), rng.choice([None, 5, 120]))
        report = run(scenario, STANDBY_RULES, params)
        for energy in report.per_device.values():
            assert energy.controlled_wh <= energy.baseline_wh
        assert report.savings_wh >= 0
        for event in report.events:
            if event.source is EventSource.Rule:
                assert event.new_mode is Mode.off


def test_run_is_deterministic():
    scenario = _scenario("evening_household.json")
    outputs = {report_to_json(run(scenario, STANDBY_RULES)) for _ in range(3)}
    assert len(outputs) == 1


def test_json_report_shape():
    report = run(_scenario("standby_overnight.json"), STANDBY_RULES)
    document = json.loads(report_to_json(report))
    assert document == report_to_dict(report)
    assert document == {
        "per_device": {"tv": {"baseline_wh": 40.0, "controlled_wh": 0.0}},
        "total": {"baseline_wh": 40.0, "controlled_wh": 0.0},
        "savings_wh": 40.0,
        "events": [{"time_min": 0, "source": "rule:standby_shutdown", "device_id": "tv", "new_mode": "off"}],
    }
    text = report_to_text(report)
    assert "savings_wh: 40.000" in text
    assert "  0 rule:standby_shutdown tv off" in text


def test_scenario_files_are_validated():
    with pytest.raises(ScenarioInvalid) as raised:
        load_scenario(read_text_file(MALFORMED / "unknown_room.json"), "unknown_room.json")
    assert "devices[0].room" in raised.value.message
    assert raised.value.file == "unknown_room.json"
    with pytest.raises(MalformedInput) as raised:
        load_scenario(read_text_file(MALFORMED / "broken.json"))
    assert raised.value.line == 3


@pytest.mark.parametrize("patch, location", [
    (lambda document: document.update(colour="red"), "scenario"),
    (lambda document: document.update(duration_min=None), "scenario"),
    (lambda document: document["devices"][0].pop("schedule"), "devices[0]"),
    (lambda document: document["devices"][0]["power_w"].update(standby=500.0), "devices[0].power_w"),
    (lambda document: document["devices"][0].update(initial_mode="sleep"), "devices[0].initial_mode"),
    (lambda document: document["devices"][0]["schedule"].extend([
        {"start_min": 0, "end_min": 100, "mode": "on"}, {"start_min": 50, "end_min": 150, "mode": "off"}]),
     "devices[0].schedule[1]"),
    (lambda document: document["occupancy_trace"].append({"room": "livingroom", "start_min": 400, "end_min": 500}),
     "occupancy_trace[0]"),
    (lambda document: document["history"].append({"day": -1, "room": "livingroom", "start_min": 0, "end_min": 10}),
     "history[0].day"),
    (lambda document: document.update(duration_min="long"), "duration_min"),
])
def test_invalid_scenarios_name_the_location(patch, location):
    document = json.loads(read_text_file(SCENARIOS / "standby_overnight.json"))
    patch(document)
    with pytest.raises(ScenarioInvalid) as raised:
        scenario_from_dict(document)
    assert raised.value.message.startswith(location)
    assert raised.value.exit_code == 1
