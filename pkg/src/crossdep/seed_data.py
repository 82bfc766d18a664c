"""
The smart-home and ICT ontologies, the cross-links of the standby shutdown case study and
the stakeholder requirement registry.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from crossdep import config
from crossdep.errors import BadQualifiedId, MalformedInput, UnknownConcept, UnknownStakeholder
from crossdep.onto_text import CrossLink, parse_links, parse_ontology, resolve
from crossdep.ontology import ConceptId, ConceptKind, Ontology, add_concept, freeze
from crossdep.utils import read_text_file, run_multithreading_tasks

# Configure the logging tool in the seed data module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)

D, C, S, F = ConceptKind.Domain, ConceptKind.Class, ConceptKind.SubClass, ConceptKind.Feature

# (kind, label, children) triples in the order the concepts are introduced in the model description.
SMART_HOME_TREE = [
    (D, "Building Information", [
        (C, "Address", [
            (F, "Latitude and Longitude", []),
        ]),
        (C, "Building Spaces", [
            (F, "Livingroom", []),
            (F, "Bedroom", []),
            (F, "Hallway", []),
            (F, "Kitchen", []),
        ]),
        (C, "Building Resources", [
            (F, "Lighting", []),
            (S, "Heating", [
                (S, "Heating System", [
                    (F, "Combo Boiler", []),
                    (F, "System Boiler", []),
                    (F, "Back Boiler", []),
                ]),
                (S, "Distribution System", [
                    (F, "No. of Radiators", []),
                    (F, "Size of Radiators", []),
                    (F, "Water Tank", []),
                ]),
            ]),
            (S, "Appliances", [
                (S, "Application Mode", [
                    (F, "Off", []),
                    (F, "On", []),
                    (F, "Stand By", []),
                ]),
            ]),
        ]),
        (C, "Basic Information", [
            (F, "EPC Rating", []),
            (F, "Air Test", []),
            (F, "Archetype", []),
            (F, "Ownership", []),
            (F, "Building Age", []),
            (F, "BIM Model", []),
            (S, "Physical Attributes", [
                (S, "Fabric Efficiency", [
                    (F, "Level of Insulation", []),
                    (F, "Quality of Building", []),
                    (F, "Orientation Level", []),
                    (F, "Design Decisions", []),
                    (F, "Ventilation", []),
                ]),
            ]),
        ]),
    ]),
    (D, "Neighbourhood/Regional Information", [
        (C, "Site Information", [
            (F, "City", []),
            (S, "Neighbourhood", [
                (F, "Lower Layer Super Output (LSOA)", []),
            ]),
            (S, "Local facilities", [
                (F, "Grid (Nearest substation)", []),
                (F, "Sub stations", []),
            ]),
        ]),
        (C, "Climate information", []),
    ]),
    (D, "Environmental Factors", [
        (C, "Environmental parameter", [
            (F, "Temperature", []),
            (F, "Humidity", []),
            (S, "Air quality", [
                (S, "Pollution level", [
                    (F, "Carbon mono oxide (CO)", []),
                    (F, "Nitrogen di oxide (NO)", []),
                    (F, "Volatile organic components (VOC)", []),
                    (S, "Particulates", [
                        (F, "Dust", []),
                        (F, "Smoke particles", []),
                    ]),
                ]),
                (F, "Pollen level", []),
            ]),
            (F, "Noise level", []),
        ]),
        (C, "Weather", [
            (F, "Dry", []),
            (S, "Rain", [
                (F, "Rainfall", []),
            ]),
            (S, "Snow", [
                (F, "Snowfall", []),
            ]),
            (S, "Wind", [
                (F, "Wind speed", []),
                (F, "Direction of speed over time", []),
            ]),
        ]),
    ]),
    (D, "Human Factors", [
        (C, "Demographic information", [
            (F, "Age", []),
            (F, "Gender", []),
            (F, "Occupation", []),
            (F, "Awareness", []),
            (F, "Health status", []),
            (F, "Ethnicity", []),
            (S, "Family composition", [
                (F, "Single", []),
                (F, "Couple", []),
                (S, "Couple with children", [
                    (F, "Children with primary age", []),
                    (F, "Children with secondary age", []),
                ]),
            ]),
        ]),
        (C, "Behavioural information", [
            (S, "Personal preferences", [
                (S, "Attitude", [
                    (F, "Financial", []),
                    (F, "Ethical", []),
                ]),
            ]),
            (F, "Thermal comfort", []),
            (F, "Visual comfort", []),
        ]),
    ]),
    (D, "Services", [
        (C, "Primary service", [
            (F, "Heating", []),
            (F, "Cooling", []),
        ]),
        (C, "Secondary service", [
            (F, "Appliances", []),
            (F, "Lighting", []),
        ]),
        (C, "Energy", [
            (F, "Electricity", []),
            (F, "Gas", []),
            (F, "Renewable energy usage", []),
        ]),
    ]),
]

# Only the four domains and the concepts the case study names are documented; the rest is kept minimal.
ICT_TREE = [
    (D, "Big Data Management", [
        (C, "Historical Data", []),
    ]),
    (D, "Devices", [
        (C, "Sensors", [
            (F, "Occupancy Sensor", []),
        ]),
    ]),
    (D, "Communication Infrastructure", []),
    (D, "Decision Making/Policy Making", [
        (C, "Reasoning Engine", []),
    ]),
]

ICT_INVENTED = [
    "ict:devices.sensors",
    "ict:decision_making_policy_making.reasoning_engine",
]

SMART_HOME_TITLE = "Smart Home Data Ontology"
ICT_TITLE = "ICT Ontology"

SMART_HOME_FILE = "smart_home.onto"
ICT_FILE = "ict.onto"
LINKS_FILE = "case_study.links"
REQUIREMENTS_FILE = "requirements.tsv"
PROVENANCE_FILE = "ict_provenance.txt"


class Stakeholder(Enum):
    Occupiers = "occupiers"
    EnergyProviders = "energy_providers"
    HousingAgencies = "housing_agencies"
    Government = "government"

    @property
    def rank(self) -> int:
        return list(Stakeholder).index(self)

    @classmethod
    def parse(cls, token: str) -> "Stakeholder":
        for stakeholder in cls:
            if token in (stakeholder.value, stakeholder.name, stakeholder.name.lower()):
                return stakeholder
        raise UnknownStakeholder("Unknown stakeholder '{0}'; expected one of {1}.".format(
            token, ", ".join(item.value for item in cls)))


@dataclass(frozen=True)
class Requirement:
    stakeholder: Stakeholder
    index: int
    text: str
    concepts: FrozenSet[ConceptId] = field(default_factory=frozenset)
    # Source order of the concept ids, kept for byte-stable output.
    concept_order: Tuple[ConceptId, ...] = ()

    @property
    def flagged(self) -> bool:
        """
        Strategic items without any data concept behind them.
        """
        return not self.concepts


@dataclass
class SeedBundle:
    ontologies: Dict[str, Ontology]
    links: List[CrossLink]
    requirements: List[Requirement]
    provenance: List[ConceptId]


def _build(slug: str, title: str, tree: Sequence) -> Ontology:
    onto = Ontology(slug, title)

    def insert(parent: Optional[ConceptId], nodes: Sequence) -> None:
        for kind, label, children in nodes:
            insert(add_concept(onto, parent, label, kind), children)

    insert(None, tree)
    return freeze(onto)


def build_smart_home() -> Ontology:
    return _build("smart_home", SMART_HOME_TITLE, SMART_HOME_TREE)


def build_ict() -> Ontology:
    return _build("ict", ICT_TITLE, ICT_TREE)


def ict_provenance() -> List[ConceptId]:
    return [ConceptId.parse(text) for text in ICT_INVENTED]


def build_case_study_links() -> List[CrossLink]:
    # 1. the occupancy sensor watches the rooms, 2. historical data records behaviour,
    # 3. the reasoning engine switches the appliance mode.
    return [
        CrossLink(
            ConceptId.parse("ict:devices.sensors.occupancy_sensor"),
            ConceptId.parse("smart_home:building_information.building_spaces"),
            "monitors"
        ),
        CrossLink(
            ConceptId.parse("ict:big_data_management.historical_data"),
            ConceptId.parse("smart_home:human_factors.behavioural_information"),
            "records"
        ),
        CrossLink(
            ConceptId.parse("ict:decision_making_policy_making.reasoning_engine"),
            ConceptId.parse("smart_home:building_information.building_resources.appliances.application_mode"),
            "controls"
        ),
    ]


def parse_requirements(text: str, ontologies: Mapping[str, Ontology], file: Optional[str] = None) -> List[Requirement]:
    """
    Read the tab-separated registry: stakeholder, index, text, comma-joined qualified concept ids.
    """
    requirements = []
    seen = set()
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if not line.strip() or line.startswith("#"):
            continue

        # Split the row into its four columns.
        columns = line.split("\t")
        if len(columns) != 4:
            raise MalformedInput("Expected 4 tab-separated columns, found {0}.".format(len(columns)), file, number, 1)
        stakeholder_token, index_token, requirement_text, concept_tokens = columns
        try:
            stakeholder = Stakeholder.parse(stakeholder_token)
        except UnknownStakeholder as error:
            raise error.located(file, number, 1)
        try:
            index = int(index_token)
        except ValueError as error:
            logger.error(error)
            raise MalformedInput("The index '{0}' is not an integer.".format(index_token), file, number)
        if index < 1 or (stakeholder, index) in seen:
            raise MalformedInput("The index {0} of {1} is repeated or not positive.".format(index, stakeholder.value),
                                 file, number)
        if not requirement_text.strip():
            raise MalformedInput("The requirement text is empty.", file, number)
        seen.add((stakeholder, index))

        # Resolve the mapped concepts against the loaded ontologies.
        concepts = []
        for token in filter(None, (item.strip() for item in concept_tokens.split(","))):
            try:
                concept_id = ConceptId.parse(token)
                resolve(ontologies, concept_id)
            except (BadQualifiedId, UnknownConcept) as error:
                raise error.located(file, number)
            concepts.append(concept_id)
        requirements.append(Requirement(stakeholder, index, requirement_text, frozenset(concepts), tuple(concepts)))

    # Return the requirements in registry order.
    return sorted(requirements, key=lambda item: (item.stakeholder.rank, item.index))


def serialize_requirements(requirements: Sequence[Requirement]) -> str:
    return "".join("{0}\t{1}\t{2}\t{3}\n".format(
        item.stakeholder.value,
        item.index,
        item.text,
        ",".join(str(concept) for concept in item.concept_order)
    ) for item in requirements)


def parse_provenance(text: str) -> List[ConceptId]:
    return [ConceptId.parse(line.strip()) for line in text.splitlines() if line.strip() and not line.startswith("#")]


def build_requirements(ontologies: Optional[Mapping[str, Ontology]] = None,
                       directory: Union[str, Path, None] = None) -> List[Requirement]:
    # The mapping is data: it is read from the shipped registry, then checked against the ontologies.
    if ontologies is None:
        ontologies = {"smart_home": build_smart_home(), "ict": build_ict()}
    path = Path(directory or config.seeds_directory()) / REQUIREMENTS_FILE
    return parse_requirements(read_text_file(path), ontologies, str(path))


def _load_ontology_task(**kwargs) -> None:
    # Check if the input dictionary has all the necessary keys.
    try:
        path = kwargs["path"]
    except KeyError as error:
        logger.error(error)
        raise
    try:
        queue = kwargs["queue"]
    except KeyError as error:
        logger.error(error)
        raise

    # Parse the file and put the ontology in the queue under its slug.
    onto = parse_ontology(read_text_file(path), str(path))
    queue.put({onto.slug: onto})


def load_ontologies(directory: Union[str, Path, None] = None) -> Dict[str, Ontology]:
    directory = Path(directory or config.seeds_directory())
    logger.info("Loading seed ontologies from %s", directory)

    # Load both ontologies in parallel.
    ontologies = run_multithreading_tasks([
        {
            "function_object": _load_ontology_task,
            "function_arguments": {
                "path": directory / SMART_HOME_FILE
            }
        },
        {
            "function_object": _load_ontology_task,
            "function_arguments": {
                "path": directory / ICT_FILE
            }
        }
    ])

    # Return the ontologies keyed by slug.
    return dict(sorted(ontologies.items()))


def load_seed_bundle(directory: Union[str, Path, None] = None) -> SeedBundle:
    directory = Path(directory or config.seeds_directory())
    ontologies = load_ontologies(directory)

    # The links and the registry refer to both ontologies.
    links_path = directory / LINKS_FILE
    links = parse_links(read_text_file(links_path), ontologies, str(links_path))
    requirements = build_requirements(ontologies, directory)
    provenance_path = directory / PROVENANCE_FILE
    provenance = parse_provenance(read_text_file(provenance_path)) if provenance_path.exists() else []

    # Return the assembled bundle.
    return SeedBundle(ontologies, links, requirements, provenance)
