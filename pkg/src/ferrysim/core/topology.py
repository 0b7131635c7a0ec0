"""Cluster/gateway/mobile topology model and the named builders.

Node names use an address-like convention: "c.1xx" for cluster c
(gateway of the left line cluster is always 1.104, of the right 2.103),
"0.1xx" for mobiles, and "S1..Sn" for stationaries in star regions.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple


class TopologyError(ValueError):
    pass


@dataclass
class TopologyGraph:
    clusters: Dict[str, List[str]]                 # cluster id -> node ids
    links: List[Tuple[str, str]]                   # directed intra-cluster links
    gateways: Dict[str, List[str]]                 # cluster id -> gateway subset
    mobiles: Dict[str, List[str]] = field(default_factory=dict)  # mobile -> contactable gateways
    link_capacity: float = 1.0

    def __post_init__(self):
        self.validate()

    @property
    def internals(self) -> Dict[str, List[str]]:
        return {c: [n for n in nodes if n not in set(self.gateways[c])]
                for c, nodes in self.clusters.items()}

    @property
    def nodes(self) -> List[str]:
        out = []
        for c in sorted(self.clusters):
            out.extend(self.clusters[c])
        return out

    def cluster_of(self, node: str) -> str:
        for c, nodes in self.clusters.items():
            if node in nodes:
                return c
        raise TopologyError("node %s is in no cluster" % node)

    def cluster_links(self, cluster: str) -> List[Tuple[str, str]]:
        members = set(self.clusters[cluster])
        return [(a, b) for (a, b) in self.links if a in members]

    def contact_pairs(self) -> set:
        pairs = set()
        for m, gws in self.mobiles.items():
            for g in gws:
                pairs.add((m, g))
                pairs.add((g, m))
        return pairs

    def validate(self) -> None:
        seen = {}
        for c, nodes in self.clusters.items():
            if not nodes:
                raise TopologyError("cluster %s is empty" % c)
            for n in nodes:
                if n in seen:
                    raise TopologyError("node %s appears in clusters %s and %s" % (n, seen[n], c))
                seen[n] = c
        for c in self.clusters:
            gws = self.gateways.get(c, [])
            if not gws:
                raise TopologyError("cluster %s has no gateway" % c)
            if len(gws) > len(self.clusters[c]):
                raise TopologyError("cluster %s has more gateways than nodes" % c)
            for g in gws:
                if g not in self.clusters[c]:
                    raise TopologyError("gateway %s not a member of cluster %s" % (g, c))
        for (a, b) in self.links:
            if a not in seen or b not in seen:
                raise TopologyError("link (%s,%s) references unknown node" % (a, b))
            if seen[a] != seen[b]:
                raise TopologyError("link (%s,%s) crosses clusters %s/%s"
                                    % (a, b, seen[a], seen[b]))
        all_gw = {g for gws in self.gateways.values() for g in gws}
        for m, contacts in self.mobiles.items():
            if m in seen:
                raise TopologyError("mobile %s collides with a cluster node" % m)
            for g in contacts:
                if g not in all_gw:
                    raise TopologyError("mobile %s contacts non-gateway %s" % (m, g))


def _line_names(cluster: int, count: int, gateway: str) -> List[str]:
    names, i = [], 0
    while len(names) < count:
        name = "%d.%d" % (cluster, 100 + i)
        i += 1
        if name == gateway:
            continue
        names.append(name)
    return names


def build_line(n_c: int, right: int, mobiles: int = 1, link_capacity: float = 1.0) -> TopologyGraph:
    """Two line clusters joined by shuttling mobiles (the test-network shape).

    Left cluster has n_c nodes ending at gateway 1.104 (source 1.100 sits
    n_c-1 hops away); right cluster has `right` nodes chained from gateway
    2.103 down to 2.100.
    """
    if n_c < 1 or right < 1:
        raise TopologyError("cluster sizes must be >= 1")
    g_left, g_right = "1.104", "2.103"
    left_internals = _line_names(1, n_c - 1, g_left)
    right_internals = _line_names(2, right - 1, g_right)
    # chains: 1.100 - 1.101 - ... - 1.104 and 2.103 - ... - 2.101 - 2.100
    left_chain = left_internals + [g_left]
    right_chain = [g_right] + list(reversed(right_internals))
    links = []
    for chain in (left_chain, right_chain):
        for a, b in zip(chain, chain[1:]):
            links.append((a, b))
            links.append((b, a))
    mobs = {"0.%d" % (100 + j): [g_left, g_right] for j in range(mobiles)}
    return TopologyGraph(
        clusters={"C1": left_chain, "C2": right_chain},
        links=links,
        gateways={"C1": [g_left], "C2": [g_right]},
        mobiles=mobs,
        link_capacity=link_capacity,
    )


def build_grid(rows: int, cols: int, clusters: int = 3, gateways_per_cluster: int = 2,
               mobiles: int = 2, link_capacity: float = 1.0) -> TopologyGraph:
    """`clusters` rows-by-cols grid clusters; mobile j visits gateway j of every cluster."""
    if rows < 1 or cols < 1 or clusters < 1:
        raise TopologyError("grid sizes must be >= 1")
    size = rows * cols
    if gateways_per_cluster < 1 or gateways_per_cluster > size:
        raise TopologyError("gateway count exceeds cluster size")
    cluster_map, gateway_map, links = {}, {}, []
    for ci in range(1, clusters + 1):
        names = ["%d.%d" % (ci, 100 + k) for k in range(size)]
        cluster_map["C%d" % ci] = names
        for r in range(rows):
            for c in range(cols):
                k = r * cols + c
                if c + 1 < cols:
                    links.append((names[k], names[k + 1]))
                    links.append((names[k + 1], names[k]))
                if r + 1 < rows:
                    links.append((names[k], names[k + cols]))
                    links.append((names[k + cols], names[k]))
        if gateways_per_cluster == 1:
            picks = [0]
        else:
            picks = sorted({round(j * (size - 1) / (gateways_per_cluster - 1))
                            for j in range(gateways_per_cluster)})
        gateway_map["C%d" % ci] = [names[k] for k in picks]
    mobs = {}
    for j in range(mobiles):
        gw_idx = j % gateways_per_cluster
        mobs["0.%d" % (100 + j)] = [gateway_map["C%d" % ci][gw_idx]
                                    for ci in range(1, clusters + 1)]
    return TopologyGraph(clusters=cluster_map, links=links, gateways=gateway_map,
                         mobiles=mobs, link_capacity=link_capacity)


def build_star(regions: int, per_region: int, mobiles: int = 1) -> TopologyGraph:
    """Disconnected stationary regions around a terminal; mobiles reach every node."""
    if regions < 1 or per_region < 1:
        raise TopologyError("region sizes must be >= 1")
    cluster_map, gateway_map = {}, {}
    idx = 1
    for r in range(regions):
        name = chr(ord("A") + r) if r < 26 else "R%d" % r
        nodes = ["S%d" % (idx + k) for k in range(per_region)]
        idx += per_region
        cluster_map[name] = nodes
        gateway_map[name] = list(nodes)  # every stationary meets the mobile directly
    all_nodes = [n for c in sorted(cluster_map) for n in cluster_map[c]]
    mobs = {"M%d" % (j + 1): all_nodes for j in range(mobiles)}
    return TopologyGraph(clusters=cluster_map, links=[], gateways=gateway_map, mobiles=mobs)


_BUILDERS = {
    "line": build_line,
    "grid": build_grid,
    "star": build_star,
}


def build_topology(spec: dict) -> TopologyGraph:
    """Dispatch on spec['builder'] with the remaining keys as builder arguments."""
    spec = dict(spec)
    try:
        name = spec.pop("builder")
    except KeyError:
        raise TopologyError("topology spec needs a 'builder' key")
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise TopologyError("unknown topology builder %r (known: %s)"
                            % (name, ", ".join(sorted(_BUILDERS))))
    return builder(**spec)
