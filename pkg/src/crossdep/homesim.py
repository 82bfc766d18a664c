"""
Minute-resolution home simulator.

A scenario is simulated twice: the baseline follows the device schedules only, the controlled
run also applies the rules after the occupancy sensors have been read. The difference between
the two energy totals is the saving attributed to the rules.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from crossdep import config
from crossdep.errors import BadSlot, MalformedInput, ScenarioInvalid
from crossdep.ontology import is_slug
from crossdep.ruledsl import Rule, RuleConflict, evaluate
from crossdep.world import Event, EventSource, Mode, WorldState

# Configure the logging tool in the simulator module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

MINUTES_PER_DAY = config.MINUTES_PER_DAY


@dataclass(frozen=True)
class ScheduleInterval:
    start_min: int
    end_min: int
    mode: Mode


@dataclass(frozen=True)
class Device:
    id: str
    room: str
    power_w: Dict[Mode, float]
    initial_mode: Mode
    schedule: Tuple[ScheduleInterval, ...] = ()


@dataclass(frozen=True)
class OccupancyInterval:
    room: str
    start_min: int
    end_min: int


@dataclass(frozen=True)
class HistoryInterval:
    day: int
    room: str
    start_min: int
    end_min: int


@dataclass(frozen=True)
class Scenario:
    name: str
    duration_min: int
    rooms: Tuple[str, ...]
    devices: Tuple[Device, ...]
    occupancy_trace: Tuple[OccupancyInterval, ...] = ()
    history: Tuple[HistoryInterval, ...] = ()


@dataclass
class OccupancyModel:
    slot_minutes: int
    freq: Dict[str, np.ndarray]
    threshold: float = config.THRESHOLD

    @property
    def slot_count(self) -> int:
        return MINUTES_PER_DAY // self.slot_minutes

    def frequency(self, room: str, slot_index: int) -> float:
        slots = self.freq.get(room)
        if slots is None:
            return 0.0
        return float(slots[slot_index])

    def predicted_occupied(self, room: str, t_min: int, horizon_min: int) -> bool:
        return predicted_occupied(self, room, t_min, horizon_min)


@dataclass(frozen=True)
class SimParams:
    slot_minutes: int = config.SLOT_MINUTES
    threshold: float = config.THRESHOLD
    # Replaces the horizon written in the rules when set.
    horizon_override: Optional[int] = None


@dataclass(frozen=True)
class DeviceEnergy:
    baseline_wh: float
    controlled_wh: float

    @property
    def savings_wh(self) -> float:
        return self.baseline_wh - self.controlled_wh


@dataclass
class SimReport:
    scenario: str
    per_device: Dict[str, DeviceEnergy]
    baseline_wh: float
    controlled_wh: float
    savings_wh: float
    events: List[Event]
    conflicts: List[RuleConflict] = field(default_factory=list)


def _check_slot(slot_minutes: int) -> None:
    if not isinstance(slot_minutes, int) or slot_minutes <= 0 or MINUTES_PER_DAY % slot_minutes:
        raise BadSlot("The slot length {0} doesn't divide a day of {1} minutes.".format(slot_minutes, MINUTES_PER_DAY))


def train(history: Sequence[HistoryInterval], slot_minutes: int = config.SLOT_MINUTES,
          threshold: float = config.THRESHOLD, days: Optional[int] = None) -> OccupancyModel:
    """
    Historical occupancy frequency per room and time slot.

    The history covers days 0..max(day) unless `days` is given; a slot's frequency is the number of
    occupied minutes in it over all days divided by slot_minutes * days.
    """
    _check_slot(slot_minutes)
    observed_days = max((interval.day for interval in history), default=-1) + 1
    if days is None:
        days = observed_days
    elif days < observed_days:
        raise ValueError("The history mentions day {0} but only {1} days were given.".format(observed_days - 1, days))
    if not history or days <= 0:
        return OccupancyModel(slot_minutes, {}, threshold)

    # Mark every occupied minute once per room and day seen in the history.
    occupied: Dict[Tuple[str, int], np.ndarray] = {}
    for interval in history:
        minutes = occupied.setdefault((interval.room, interval.day), np.zeros(MINUTES_PER_DAY, dtype=bool))
        minutes[interval.start_min:interval.end_min] = True

    totals: Dict[str, np.ndarray] = {}
    for (room, _), minutes in occupied.items():
        totals[room] = totals.get(room, 0) + minutes.astype(np.int64)

    # Sum the occupied minutes per slot and normalise by the observed time.
    freq = {}
    for room in sorted(totals):
        per_slot = totals[room].reshape(-1, slot_minutes).sum(axis=1)
        freq[room] = per_slot / float(slot_minutes * days)

    logger.debug("Trained occupancy model on %d days for %d rooms.", days, len(freq))
    return OccupancyModel(slot_minutes, freq, threshold)


def predicted_occupied(model: OccupancyModel, room: str, t_min: int, horizon_min: int) -> bool:
    if horizon_min <= 0:
        raise ValueError("The horizon must be positive, got {0}.".format(horizon_min))
    slots = model.freq.get(room)
    if slots is None:
        return False

    # Slots overlapping [t, t + horizon) on the minute-of-day clock, wrapping at midnight.
    start = t_min % MINUTES_PER_DAY
    first = start // model.slot_minutes
    last = (start + horizon_min - 1) // model.slot_minutes
    count = min(last - first + 1, model.slot_count)
    window = [(first + offset) % model.slot_count for offset in range(count)]
    return bool(np.any(slots[window] >= model.threshold))


def _schedule_changes(device: Device) -> Dict[int, Mode]:
    # Minute -> mode the schedule imposes at that minute.
    changes = {}
    for interval in device.schedule:
        changes.setdefault(interval.end_min, device.initial_mode)
    for interval in device.schedule:
        changes[interval.start_min] = interval.mode
    return changes


def _occupancy_at(scenario: Scenario, t: int) -> Dict[str, bool]:
    occupancy = {room: False for room in scenario.rooms}
    for interval in scenario.occupancy_trace:
        if interval.start_min <= t < interval.end_min:
            occupancy[interval.room] = True
    return occupancy


def _simulate(scenario: Scenario, rules: Sequence[Rule], model: OccupancyModel,
              horizon_override: Optional[int], conflicts: List[RuleConflict]) -> Tuple[Dict[str, float], List[Event]]:
    # Initialize the world before minute 0: initial modes, every room empty.
    world = WorldState(
        time_min=0,
        device_modes={device.id: device.initial_mode for device in scenario.devices},
        device_rooms={device.id: device.room for device in scenario.devices},
        occupancy={room: False for room in scenario.rooms}
    )
    schedules = {device.id: _schedule_changes(device) for device in scenario.devices}
    watt_minutes = {device.id: 0.0 for device in scenario.devices}
    power = {device.id: device.power_w for device in scenario.devices}

    for t in range(scenario.duration_min):
        world.time_min = t

        # The schedule is applied first and wins at its own boundaries.
        for device in scenario.devices:
            mode = schedules[device.id].get(t)
            if mode is not None:
                world.set_mode(device.id, mode, EventSource.Schedule)

        # Read the occupancy sensors.
        occupancy = _occupancy_at(scenario, t)
        world.occupancy_changed = occupancy != world.occupancy
        world.occupancy = occupancy

        # Evaluate the rules against the world as it is now, then apply their actions.
        if rules:
            for rule_id, device_id, action in evaluate(list(rules), world, model, horizon_override, conflicts):
                world.set_mode(device_id, action.mode, EventSource.Rule, rule_id)

        # Account the energy of this minute.
        for device in scenario.devices:
            watt_minutes[device.id] += power[device.id][world.device_modes[device.id]]

    # Return watt-hours per device and the event log.
    return {device_id: value / 60.0 for device_id, value in watt_minutes.items()}, world.event_log


def run(scenario: Scenario, rules: Sequence[Rule], params: SimParams = SimParams()) -> SimReport:
    validate_scenario(scenario)
    model = train(scenario.history, params.slot_minutes, params.threshold)

    # Baseline: schedules only. Controlled: schedules, sensors and rules.
    baseline, _ = _simulate(scenario, [], model, None, [])
    conflicts: List[RuleConflict] = []
    controlled, events = _simulate(scenario, rules, model, params.horizon_override, conflicts)

    # Assemble the report in device order.
    per_device = {
        device.id: DeviceEnergy(baseline[device.id], controlled[device.id]) for device in scenario.devices
    }
    report = SimReport(
        scenario=scenario.name,
        per_device=per_device,
        baseline_wh=sum(energy.baseline_wh for energy in per_device.values()),
        controlled_wh=sum(energy.controlled_wh for energy in per_device.values()),
        savings_wh=sum(energy.savings_wh for energy in per_device.values()),
        events=events,
        conflicts=conflicts
    )
    logger.info("Scenario %s saved %.3f Wh with %d events.", scenario.name, report.savings_wh, len(events))
    return report


def _interval_error(location: str, start: int, end: int, limit: int) -> Optional[str]:
    if not (0 <= start < end <= limit):
        return "{0}: the interval [{1}, {2}) must satisfy 0 <= start < end <= {3}.".format(location, start, end, limit)
    return None


def validate_scenario(scenario: Scenario) -> None:
    # Collect the first violation of every kind, reported with its location in the scenario.
    problems = []
    if scenario.duration_min <= 0:
        problems.append("duration_min: must be positive.")
    rooms = set(scenario.rooms)
    if len(rooms) != len(scenario.rooms):
        problems.append("rooms: room names must be unique.")
    for position, room in enumerate(scenario.rooms):
        if not is_slug(room):
            problems.append("rooms[{0}]: '{1}' is not a slug.".format(position, room))

    device_ids = set()
    for position, device in enumerate(scenario.devices):
        location = "devices[{0}]".format(position)
        if not is_slug(device.id):
            problems.append("{0}.id: '{1}' is not a slug.".format(location, device.id))
        if device.id in device_ids:
            problems.append("{0}.id: '{1}' is used twice.".format(location, device.id))
        device_ids.add(device.id)
        if device.room not in rooms:
            problems.append("{0}.room: unknown room '{1}'.".format(location, device.room))
        off, standby, on = (device.power_w.get(mode, -1) for mode in (Mode.off, Mode.standby, Mode.on))
        if not (0 <= off <= standby <= on):
            problems.append("{0}.power_w: expected 0 <= off <= standby <= on.".format(location))
        previous_end = None
        for index, interval in sorted(enumerate(device.schedule), key=lambda item: item[1].start_min):
            problem = _interval_error("{0}.schedule[{1}]".format(location, index),
                                      interval.start_min, interval.end_min, scenario.duration_min)
            if problem:
                problems.append(problem)
            elif previous_end is not None and interval.start_min < previous_end:
                problems.append("{0}.schedule[{1}]: overlaps the previous interval.".format(location, index))
            previous_end = interval.end_min

    for position, interval in enumerate(scenario.occupancy_trace):
        location = "occupancy_trace[{0}]".format(position)
        if interval.room not in rooms:
            problems.append("{0}.room: unknown room '{1}'.".format(location, interval.room))
        problem = _interval_error(location, interval.start_min, interval.end_min, scenario.duration_min)
        if problem:
            problems.append(problem)

    for position, interval in enumerate(scenario.history):
        location = "history[{0}]".format(position)
        if interval.room not in rooms:
            problems.append("{0}.room: unknown room '{1}'.".format(location, interval.room))
        if interval.day < 0:
            problems.append("{0}.day: must not be negative.".format(location))
        problem = _interval_error(location, interval.start_min, interval.end_min, MINUTES_PER_DAY)
        if problem:
            problems.append(problem)

    if problems:
        raise ScenarioInvalid(problems[0] if len(problems) == 1 else "; ".join(problems))


def _fields(record: Any, location: str, names: Sequence[str]) -> Dict[str, Any]:
    # Make sure that the record has exactly the expected fields, none of them null.
    if not isinstance(record, dict):
        raise ScenarioInvalid("{0}: expected an object.".format(location))
    for argument_name, argument_value in record.items():
        if argument_name not in names:
            raise ScenarioInvalid("{0}: the '{1}' field doesn't exist.".format(location, argument_name))
        if argument_value is None:
            raise ScenarioInvalid("{0}: the '{1}' field can't be null.".format(location, argument_name))
    for name in names:
        if name not in record:
            raise ScenarioInvalid("{0}: the '{1}' field is missing.".format(location, name))
    return record


def _integer(value: Any, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioInvalid("{0}: expected an integer.".format(location))
    return value


def _number(value: Any, location: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioInvalid("{0}: expected a number.".format(location))
    return float(value)


def _string(value: Any, location: str) -> str:
    if not isinstance(value, str):
        raise ScenarioInvalid("{0}: expected a string.".format(location))
    return value


def _mode(value: Any, location: str) -> Mode:
    try:
        return Mode.parse(_string(value, location))
    except KeyError as error:
        logger.error(error)
        raise ScenarioInvalid("{0}: unknown mode '{1}'.".format(location, value))


def _list(value: Any, location: str) -> List[Any]:
    if not isinstance(value, list):
        raise ScenarioInvalid("{0}: expected an array.".format(location))
    return value


def scenario_from_dict(document: Any) -> Scenario:
    record = _fields(document, "scenario", ["name", "duration_min", "rooms", "devices", "occupancy_trace", "history"])

    devices = []
    for position, item in enumerate(_list(record["devices"], "devices")):
        location = "devices[{0}]".format(position)
        fields = _fields(item, location, ["id", "room", "power_w", "initial_mode", "schedule"])
        power = _fields(fields["power_w"], location + ".power_w", ["off", "standby", "on"])
        schedule = []
        for index, entry in enumerate(_list(fields["schedule"], location + ".schedule")):
            entry_location = "{0}.schedule[{1}]".format(location, index)
            entry = _fields(entry, entry_location, ["start_min", "end_min", "mode"])
            schedule.append(ScheduleInterval(
                _integer(entry["start_min"], entry_location + ".start_min"),
                _integer(entry["end_min"], entry_location + ".end_min"),
                _mode(entry["mode"], entry_location + ".mode")
            ))
        devices.append(Device(
            id=_string(fields["id"], location + ".id"),
            room=_string(fields["room"], location + ".room"),
            power_w={Mode.parse(name): _number(power[name], "{0}.power_w.{1}".format(location, name))
                     for name in ("off", "standby", "on")},
            initial_mode=_mode(fields["initial_mode"], location + ".initial_mode"),
            schedule=tuple(schedule)
        ))

    trace = []
    for position, item in enumerate(_list(record["occupancy_trace"], "occupancy_trace")):
        location = "occupancy_trace[{0}]".format(position)
        fields = _fields(item, location, ["room", "start_min", "end_min"])
        trace.append(OccupancyInterval(
            _string(fields["room"], location + ".room"),
            _integer(fields["start_min"], location + ".start_min"),
            _integer(fields["end_min"], location + ".end_min")
        ))

    history = []
    for position, item in enumerate(_list(record["history"], "history")):
        location = "history[{0}]".format(position)
        fields = _fields(item, location, ["day", "room", "start_min", "end_min"])
        history.append(HistoryInterval(
            _integer(fields["day"], location + ".day"),
            _string(fields["room"], location + ".room"),
            _integer(fields["start_min"], location + ".start_min"),
            _integer(fields["end_min"], location + ".end_min")
        ))

    scenario = Scenario(
        name=_string(record["name"], "name"),
        duration_min=_integer(record["duration_min"], "duration_min"),
        rooms=tuple(_string(room, "rooms[{0}]".format(index)) for index, room in enumerate(_list(record["rooms"], "rooms"))),
        devices=tuple(devices),
        occupancy_trace=tuple(trace),
        history=tuple(history)
    )
    validate_scenario(scenario)
    return scenario


def load_scenario(text: str, file: Optional[str] = None) -> Scenario:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        logger.error(error)
        raise MalformedInput("The scenario is not valid JSON: {0}".format(error.msg), file, error.lineno, error.colno)
    try:
        return scenario_from_dict(document)
    except ScenarioInvalid as error:
        raise error.located(file)


def _rounded(value: float) -> float:
    # Three decimals on output; -0.0 is printed as 0.0.
    return round(value, 3) + 0.0


def report_to_dict(report: SimReport) -> Dict[str, Any]:
    return {
        "per_device": {
            device_id: {
                "baseline_wh": _rounded(energy.baseline_wh),
                "controlled_wh": _rounded(energy.controlled_wh)
            } for device_id, energy in report.per_device.items()
        },
        "total": {
            "baseline_wh": _rounded(report.baseline_wh),
            "controlled_wh": _rounded(report.controlled_wh)
        },
        "savings_wh": _rounded(report.savings_wh),
        "events": [
            {
                "time_min": event.time_min,
                "source": event.source_label,
                "device_id": event.device_id,
                "new_mode": event.new_mode.value
            } for event in report.events
        ]
    }


def report_to_json(report: SimReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_to_text(report: SimReport) -> str:
    lines = [
        "scenario: {0}".format(report.scenario),
        "baseline_wh: {0:.3f}".format(report.baseline_wh),
        "controlled_wh: {0:.3f}".format(report.controlled_wh),
        "savings_wh: {0:.3f}".format(_rounded(report.savings_wh)),
    ]
    for device_id, energy in report.per_device.items():
        lines.append("device {0}: baseline_wh={1:.3f} controlled_wh={2:.3f} savings_wh={3:.3f}".format(
            device_id, energy.baseline_wh, energy.controlled_wh, _rounded(energy.savings_wh)))
    for conflict in report.conflicts:
        lines.append("conflict {0}: {1} kept {2}, {3} dropped {4}".format(
            conflict.device_id, conflict.kept_rule, conflict.kept.mode.value,
            conflict.dropped_rule, conflict.dropped.mode.value))
    lines.append("events: {0}".format(len(report.events)))
    for event in report.events:
        lines.append("  {0} {1} {2} {3}".format(event.time_min, event.source_label, event.device_id, event.new_mode.value))
    return "\n".join(lines) + "\n"
