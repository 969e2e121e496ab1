"""Built-in networks and the JSON instance format.

An instance file is a JSON object with keys ``alphabet`` (q), ``vertices``,
``source``, ``terminals``, ``edges`` (list of [tail, head]; position = edge id),
``vulnerable`` (edge ids) and ``t``. Named instances ship as JSON files in the
``instances`` package directory and can be rebuilt from the functions below.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import netgraph
from .errors import InvalidInput, UnknownFamily
from .netgraph import LevelMatrices, Network


@dataclass(frozen=True)
class Instance:
    network: Network
    q: int
    t: int
    id_map: dict[int, int]

    def to_dict(self) -> dict:
        d = self.network.to_dict()
        d["alphabet"] = self.q
        d["t"] = self.t
        return {k: d[k] for k in ("alphabet", "vertices", "source", "terminals", "edges", "vulnerable", "t")}


def parse_instance(d: dict) -> Instance:
    try:
        q = int(d["alphabet"])
        t = int(d.get("t", 0))
        net, mapping = netgraph.from_dict(d, return_mapping=True)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed instance: {exc}") from exc
    if q < 2:
        raise InvalidInput("alphabet size must be at least 2")
    if t < 0:
        raise InvalidInput("t must be nonnegative")
    return Instance(net, q, t, mapping)


def library_names() -> list[str]:
    root = resources.files(__package__) / "instances"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_instance(path_or_name: str) -> Instance:
    """Parse an instance file, or a built-in instance by name."""
    p = Path(path_or_name)
    if p.is_file():
        text = p.read_text()
    else:
        res = resources.files(__package__) / "instances" / f"{path_or_name}.json"
        if not res.is_file():
            raise InvalidInput(f"no such file or built-in instance: {path_or_name}")
        text = res.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc
    return parse_instance(data)


# ------------------------------------------------------------------ networks


def diamond() -> Network:
    """([1,2],[1,1]): S->V1, S->V2 twice, V1->T, V2->T; source edges vulnerable."""
    return netgraph.two_level_network([1, 2], [1, 1])


def mirrored_diamond() -> Network:
    return netgraph.two_level_network([2, 2], [1, 1])


RELAY_EDGES = [
    ("S", "V1"), ("S", "V1"), ("S", "V2"), ("S", "V2"),
    ("V1", "T1"), ("V1", "V3"), ("V2", "V3"), ("V2", "T2"),
    ("V3", "V4"), ("V4", "T1"), ("V4", "T2"),
]
RELAY_RESTRICTED = (0, 1, 2, 3, 5, 6, 8)


def two_terminal_relay(vulnerable: str = "restricted") -> Network:
    """Two terminals fed directly by V1/V2 and through the shared relay V3 -> V4.

    ``vulnerable="restricted"`` marks the four source edges plus the three
    edges into and out of V3; ``"all"`` marks every edge and ``"none"`` none.
    """
    vul = {"all": range(len(RELAY_EDGES)), "none": (), "restricted": RELAY_RESTRICTED}[vulnerable]
    return netgraph.validate(
        ["S", "V1", "V2", "V3", "V4", "T1", "T2"], RELAY_EDGES, "S", ["T1", "T2"], vul
    )


def constant_branch() -> Network:
    """S->V1, S->T, S->V2, V1->T, V2->T with the three source edges vulnerable."""
    return netgraph.validate(
        ["S", "V1", "V2", "T"],
        [("S", "V1"), ("S", "T"), ("S", "V2"), ("V1", "T"), ("V2", "T")],
        "S",
        ["T"],
        [0, 1, 2],
    )


def three_parallel() -> Network:
    """Three parallel edges S->V and one edge V->T."""
    return netgraph.validate(["S", "V", "T"], [("S", "V")] * 3 + [("V", "T")], "S", ["T"], [0, 1, 2])


HEXAGON_MIDDLE = [[1, 1, 0, 0]] * 4 + [[0, 0, 1, 1]] * 2


def hexagon() -> Network:
    """Simple 3-level network whose middle layer splits into a 4x2 and a 2x2 block."""
    lm = LevelMatrices.of([[1] * 6], HEXAGON_MIDDLE, [[1]] * 4)
    return netgraph.from_level_matrices(lm, "source")


def hexagon_expanded() -> Network:
    """Hexagon with one extra layer: each source edge enters its own node first."""
    first = [f"V{i}" for i in range(1, 7)]
    edges = [("S", v) for v in first]
    edges += [(v, w) for v in first[:4] for w in ("V7", "V8")]
    edges += [(v, w) for v in first[4:] for w in ("V9", "V10")]
    edges += [(w, "T") for w in ("V7", "V8", "V9", "V10")]
    verts = ["S", *first, "V7", "V8", "V9", "V10", "T"]
    return netgraph.validate(verts, edges, "S", ["T"], range(6))


WIDE_EDGES = (
    [("S", "T1"), ("S", "V1"), ("S", "V1"), ("S", "V2"), ("S", "V2"), ("S", "T2")]
    + [("V1", "V3")] * 2
    + [("V2", "V3")] * 2
    + [("V3", "V4")] * 3
    + [("V4", "T1")] * 3
    + [("V4", "T2")] * 3
)


def two_terminal_wide() -> Network:
    """Two terminals with a direct source edge each and a 3-wide shared trunk V3 -> V4.

    Vulnerable: the direct edge S->T1 and the four edges into V3; min-cut 4.
    """
    return netgraph.validate(
        ["S", "V1", "V2", "V3", "V4", "T1", "T2"], WIDE_EDGES, "S", ["T1", "T2"], [0, 6, 7, 8, 9]
    )


FAMILY_DEGREES = {
    "A": lambda t: ([t, 2 * t], [t, t]),
    "B": lambda s: ([1, s + 1], [1, s]),
    "C": lambda t: ([t, t + 1], [t, t]),
    "D": lambda t: ([2 * t, 2 * t], [1, 1]),
    "E": lambda t: ([t, t + 1], [1, 1]),
}


def family_degrees(family: str, param: int) -> tuple[list[int], list[int]]:
    """Degree lists (a, b) of a named 2-node family member."""
    try:
        a, b = FAMILY_DEGREES[family.upper()](param)
    except KeyError:
        raise UnknownFamily(f"unknown family {family!r}") from None
    if param < 1:
        raise InvalidInput("family parameter must be positive")
    return a, b


def family_adversary(family: str, param: int) -> int:
    """Adversary budget the family is studied under (t = 1 for B, else the parameter)."""
    return 1 if family.upper() == "B" else param


def family_network(family: str, param: int) -> Network:
    a, b = family_degrees(family, param)
    return netgraph.two_level_network(a, b)


def builtin_instances() -> dict[str, Instance]:
    """Named instances written to the package's ``instances`` directory."""
    out = {
        "diamond": (diamond(), 2, 1),
        "diamond_q3": (diamond(), 3, 1),
        "mirrored_diamond": (mirrored_diamond(), 2, 1),
        "relay": (two_terminal_relay(), 3, 1),
        "relay_all_vulnerable": (two_terminal_relay("all"), 3, 1),
        "constant_branch": (constant_branch(), 3, 1),
        "three_parallel": (three_parallel(), 5, 0),
        "hexagon": (hexagon(), 2, 1),
        "wide": (two_terminal_wide(), 2, 1),
        "partition_example": (netgraph.two_level_network([2, 5, 6], [2, 2, 2]), 11, 2),
        "singleton_tight_example": (
            netgraph.two_level_network([12, 8, 2, 2, 1], [5, 2, 4, 3, 1]), 11, 3),
    }
    out.update(_reduction_stages())
    out["relay_plain"] = (two_terminal_relay("none"), 3, 0)
    out["hexagon_expanded"] = (hexagon_expanded(), 2, 1)
    for fam, params in (("A", (1, 2, 3)), ("B", (1, 2, 3)), ("C", (2, 3)), ("D", (1, 2)), ("E", (1, 2, 3))):
        for p in params:
            out[f"family_{fam}{p}"] = (family_network(fam, p), 2, family_adversary(fam, p))
    return {
        k: Instance(net, q, t, {i: i for i in range(len(net.edges))}) for k, (net, q, t) in out.items()
    }


RELAY_CUTS = ((0, 1, 8), (4, 9), "T1")
WIDE_CUTS = ((0, 6, 7, 8, 9), (0, 13, 14, 15), "T1")


def _reduction_stages() -> dict:
    """Induced 3-level and associated 2-level networks of the two reduction examples."""
    from .reduce import associate_2level, induce_3level

    out = {}
    for name, net, q, (c1, c2, term) in (
        ("relay", two_terminal_relay(), 3, RELAY_CUTS),
        ("wide", two_terminal_wide(), 2, WIDE_CUTS),
    ):
        ind = induce_3level(net, netgraph.CutPair(frozenset(c1), frozenset(c2), term))
        out[f"{name}_induced"] = (ind.network, q, 1)
        out[f"{name}_associated"] = (associate_2level(ind.network).network, q, 1)
    out["hexagon_associated"] = (associate_2level(hexagon()).network, 2, 1)
    return out


def write_library(directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, inst in builtin_instances().items():
        (directory / f"{name}.json").write_text(json.dumps(inst.to_dict(), indent=1) + "\n")
