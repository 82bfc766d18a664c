from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional


class Mode(Enum):
    """
    Application mode of an appliance.
    """
    off = "off"
    on = "on"
    standby = "standby"

    @classmethod
    def parse(cls, token: str) -> "Mode":
        try:
            return cls(token)
        except ValueError:
            raise KeyError(token)


class EventSource(Enum):
    Schedule = "schedule"
    Rule = "rule"


@dataclass(frozen=True)
class Event:
    time_min: int
    source: EventSource
    device_id: str
    new_mode: Mode
    rule_id: Optional[str] = None

    @property
    def source_label(self) -> str:
        if self.source is EventSource.Rule:
            return "rule:{0}".format(self.rule_id)
        return self.source.value


@dataclass
class WorldState:
    time_min: int
    device_modes: Dict[str, Mode]
    device_rooms: Dict[str, str]
    occupancy: Dict[str, bool]
    occupancy_changed: bool = False
    event_log: List[Event] = field(default_factory=list)

    def set_mode(self, device_id: str, mode: Mode, source: EventSource, rule_id: Optional[str] = None) -> bool:
        # Only real changes are logged.
        if self.device_modes[device_id] == mode:
            return False
        self.device_modes[device_id] = mode
        self.event_log.append(Event(self.time_min, source, device_id, mode, rule_id))
        return True
