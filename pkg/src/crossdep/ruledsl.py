"""
Condition-action rules over the simulated home.

    rule standby_shutdown:
      on tick
      when device.mode == standby and not occupied(device.room) and not predicted_occupied(device.room, 60min)
      then set device.mode = off

Every rule is bound to each device in turn; conditions form a conjunction.
"""
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from crossdep import config
from crossdep.errors import DuplicateRuleId, ParseError, ParseErrorCode
from crossdep.ontology import is_slug
from crossdep.world import Mode, WorldState

# Configure the logging tool in the rule language module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+min)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<symbol>==|[=:(),.])|(?P<other>\S))")


class Trigger(Enum):
    Tick = "tick"
    OccupancyChange = "occupancy_change"


class Predicate(Enum):
    ModeIs = "mode_is"
    Occupied = "occupied"
    PredictedOccupied = "predicted_occupied"


@dataclass(frozen=True)
class Condition:
    predicate: Predicate
    negated: bool = False
    mode: Optional[Mode] = None
    horizon_minutes: Optional[int] = None


@dataclass(frozen=True)
class SetMode:
    mode: Mode


@dataclass(frozen=True)
class Rule:
    id: str
    trigger: Trigger
    conditions: Tuple[Condition, ...]
    actions: Tuple[SetMode, ...]


@dataclass(frozen=True)
class RuleConflict:
    device_id: str
    kept_rule: str
    kept: SetMode
    dropped_rule: str
    dropped: SetMode


class _Tokens:
    """
    Tokens of one line with their 1-based columns.
    """

    def __init__(self, text: str, line: int, file: Optional[str]) -> None:
        self.line = line
        self.file = file
        self.items: List[Tuple[str, str, int]] = []
        code = text.split("#", 1)[0]
        for match in _TOKEN.finditer(code):
            kind = match.lastgroup
            self.items.append((kind, match.group(kind), match.start(kind) + 1))
        self.position = 0
        self.end_column = len(code.rstrip()) + 1

    def error(self, code: ParseErrorCode, message: str, column: Optional[int] = None) -> ParseError:
        return ParseError(code, message, self.file, self.line, column if column is not None else self.column)

    @property
    def column(self) -> int:
        if self.position < len(self.items):
            return self.items[self.position][2]
        return self.end_column

    def peek(self) -> Optional[str]:
        if self.position < len(self.items):
            return self.items[self.position][1]
        return None

    def take(self) -> str:
        value = self.peek()
        if value is None:
            raise self.error(ParseErrorCode.UnexpectedToken, "Unexpected end of line.")
        self.position += 1
        return value

    def expect(self, literal: str, code: ParseErrorCode = ParseErrorCode.UnexpectedToken) -> None:
        column = self.column
        value = self.peek()
        if value != literal:
            raise self.error(code, "Expected '{0}', found '{1}'.".format(literal, value or "end of line"), column)
        self.position += 1

    def done(self) -> None:
        if self.peek() is not None:
            raise self.error(ParseErrorCode.UnexpectedToken, "Unexpected '{0}'.".format(self.peek()))


def _mode(tokens: _Tokens) -> Mode:
    column = tokens.column
    token = tokens.take()
    try:
        return Mode.parse(token)
    except KeyError:
        raise tokens.error(ParseErrorCode.UnknownMode, "Unknown mode '{0}'; expected off, on or standby.".format(token), column)


def _device_field(tokens: _Tokens, name: str) -> None:
    tokens.expect("device")
    tokens.expect(".")
    tokens.expect(name)


def _condition(tokens: _Tokens) -> Condition:
    negated = False
    if tokens.peek() == "not":
        tokens.take()
        negated = True
    column = tokens.column
    name = tokens.take()

    # device.mode == <mode>
    if name == "device":
        if negated:
            raise tokens.error(ParseErrorCode.UnexpectedToken, "'not' applies to occupancy predicates only.", column)
        tokens.expect(".")
        tokens.expect("mode")
        tokens.expect("==")
        return Condition(Predicate.ModeIs, mode=_mode(tokens))

    # [not] occupied(device.room)
    if name == Predicate.Occupied.value:
        tokens.expect("(")
        _device_field(tokens, "room")
        tokens.expect(")")
        return Condition(Predicate.Occupied, negated)

    # [not] predicted_occupied(device.room, <int>min)
    if name == Predicate.PredictedOccupied.value:
        tokens.expect("(")
        _device_field(tokens, "room")
        tokens.expect(",")
        horizon_column = tokens.column
        horizon = tokens.take()
        if not horizon.endswith("min") or not horizon[:-3].isdigit():
            raise tokens.error(ParseErrorCode.UnexpectedToken, "Expected a horizon such as '60min'.", horizon_column)
        if int(horizon[:-3]) <= 0:
            raise tokens.error(ParseErrorCode.BadHorizon, "The horizon must be positive.", horizon_column)
        tokens.expect(")")
        return Condition(Predicate.PredictedOccupied, negated, horizon_minutes=int(horizon[:-3]))

    raise tokens.error(ParseErrorCode.UnknownPredicate, "Unknown predicate '{0}'.".format(name), column)


def parse_rules(text: str, file: Optional[str] = None) -> List[Rule]:
    rules: List[Rule] = []
    current: Optional[dict] = None

    def close() -> None:
        # Check that the rule under construction has all its clauses.
        if current is None:
            return
        header = current["header"]
        if current["trigger"] is None or not current["conditions"] or not current["actions"]:
            missing = "on" if current["trigger"] is None else "when" if not current["conditions"] else "then"
            raise header.error(ParseErrorCode.UnexpectedToken,
                               "The rule '{0}' has no '{1}' clause.".format(current["id"], missing), 1)
        rules.append(Rule(current["id"], current["trigger"], tuple(current["conditions"]), tuple(current["actions"])))

    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        stripped = line.strip(" ")
        if not stripped or stripped.startswith("#"):
            continue
        leading = line[:len(line) - len(line.lstrip())]
        tokens = _Tokens(line, number, file)
        if "\t" in leading:
            raise tokens.error(ParseErrorCode.BadIndent, "Tabs are not allowed in indentation.", leading.index("\t") + 1)
        indent = len(leading)

        # A rule header starts at the left margin.
        if indent == 0:
            close()
            tokens.expect("rule", ParseErrorCode.UnknownKeyword)
            id_column = tokens.column
            rule_id = tokens.take()
            if not is_slug(rule_id):
                raise tokens.error(ParseErrorCode.UnexpectedToken, "'{0}' is not a valid rule id.".format(rule_id), id_column)
            tokens.expect(":")
            tokens.done()
            if any(rule.id == rule_id for rule in rules):
                raise DuplicateRuleId("The rule id '{0}' is used twice.".format(rule_id), file, number, id_column)
            current = {"id": rule_id, "header": tokens, "trigger": None, "conditions": [], "actions": []}
            continue

        # Clauses are indented by two spaces inside a rule.
        if indent != 2 or current is None:
            raise tokens.error(ParseErrorCode.BadIndent, "Clauses must be indented by two spaces inside a rule.", indent + 1)
        keyword_column = tokens.column
        keyword = tokens.take()
        if keyword == "on":
            if current["trigger"] is not None or current["conditions"] or current["actions"]:
                raise tokens.error(ParseErrorCode.UnexpectedToken, "The 'on' clause must come first and once.", keyword_column)
            trigger_column = tokens.column
            trigger = tokens.take()
            try:
                current["trigger"] = Trigger(trigger)
            except ValueError:
                raise tokens.error(ParseErrorCode.UnknownKeyword, "Unknown trigger '{0}'.".format(trigger), trigger_column)
        elif keyword == "when":
            if current["trigger"] is None or current["conditions"] or current["actions"]:
                raise tokens.error(ParseErrorCode.UnexpectedToken, "The 'when' clause must follow 'on' once.", keyword_column)
            current["conditions"].append(_condition(tokens))
            while tokens.peek() == "and":
                tokens.take()
                current["conditions"].append(_condition(tokens))
        elif keyword == "then":
            if not current["conditions"]:
                raise tokens.error(ParseErrorCode.UnexpectedToken, "The 'then' clause must follow 'when'.", keyword_column)
            tokens.expect("set")
            _device_field(tokens, "mode")
            tokens.expect("=")
            current["actions"].append(SetMode(_mode(tokens)))
        else:
            raise tokens.error(ParseErrorCode.UnknownKeyword, "Unknown clause '{0}'.".format(keyword), keyword_column)
        tokens.done()

    close()
    logger.debug("Parsed %d rules.", len(rules))
    return rules


def format_condition(condition: Condition) -> str:
    prefix = "not " if condition.negated else ""
    if condition.predicate is Predicate.ModeIs:
        return "device.mode == {0}".format(condition.mode.value)
    if condition.predicate is Predicate.Occupied:
        return "{0}occupied(device.room)".format(prefix)
    return "{0}predicted_occupied(device.room, {1}min)".format(prefix, condition.horizon_minutes)


def print_rules(rules: List[Rule]) -> str:
    blocks = []
    for rule in rules:
        lines = [
            "rule {0}:".format(rule.id),
            "  on {0}".format(rule.trigger.value),
            "  when {0}".format(" and ".join(format_condition(condition) for condition in rule.conditions)),
        ]
        lines.extend("  then set device.mode = {0}".format(action.mode.value) for action in rule.actions)
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def _holds(condition: Condition, device_id: str, world: WorldState, predictor, horizon_override: Optional[int]) -> bool:
    room = world.device_rooms[device_id]
    if condition.predicate is Predicate.ModeIs:
        value = world.device_modes[device_id] == condition.mode
    elif condition.predicate is Predicate.Occupied:
        value = world.occupancy.get(room, False)
    else:
        horizon = horizon_override if horizon_override is not None else condition.horizon_minutes
        value = predictor.predicted_occupied(room, world.time_min, horizon)
    return value != condition.negated


def fires(rule: Rule, world: WorldState) -> bool:
    if rule.trigger is Trigger.Tick:
        return True
    return world.occupancy_changed


def evaluate(rules: List[Rule], world: WorldState, predictor, horizon_override: Optional[int] = None,
             conflicts: Optional[List[RuleConflict]] = None) -> List[Tuple[str, str, SetMode]]:
    """
    Actions the rules emit for this step, all computed against the world as it was before the step.

    Ordered by rule file order, then device id, then action order. Actions that would leave a device
    in its current mode are dropped; when two actions set different modes on one device the first wins
    and the pair is appended to `conflicts`.
    """
    actions = []
    chosen = {}
    for rule in rules:
        if not fires(rule, world):
            continue
        for device_id in sorted(world.device_modes):
            # All conditions must hold for this device binding.
            if not all(_holds(condition, device_id, world, predictor, horizon_override) for condition in rule.conditions):
                continue
            for action in rule.actions:
                if world.device_modes[device_id] == action.mode:
                    continue
                previous = chosen.get(device_id)
                if previous is not None:
                    if previous[1] != action:
                        conflict = RuleConflict(device_id, previous[0], previous[1], rule.id, action)
                        logger.warning("Rule conflict on %s: %s keeps %s, %s drops %s.", device_id,
                                       conflict.kept_rule, conflict.kept.mode.value,
                                       conflict.dropped_rule, conflict.dropped.mode.value)
                        if conflicts is not None:
                            conflicts.append(conflict)
                    continue
                chosen[device_id] = (rule.id, action)
                actions.append((rule.id, device_id, action))

    # Return the actions in emission order.
    return actions
