"""MaxWeight link activation: commodity choice by queue differential, then a
schedule over the feasible activation set.

Exact maximization over the activation set is exponential in general, so the
default is greedy maximal-weight matching under node-exclusive interference;
an exact dynamic program covers line clusters and exhaustive enumeration is
used for small clusters (<= 16 links).  All comparisons break ties toward the
lowest node/commodity identifier so runs are reproducible.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

Link = Tuple[str, str]


@dataclass
class InterferenceModel:
    kind: str = "node_exclusive"            # or "independent_sets"
    link_rate: float = 1.0
    sets: Optional[List[List[Link]]] = None  # feasible activation sets, independent_sets only

    def __post_init__(self):
        if self.kind not in ("node_exclusive", "independent_sets"):
            raise ValueError("unknown interference kind %r" % self.kind)
        if self.kind == "independent_sets" and not self.sets:
            raise ValueError("independent_sets model needs the set family")


def backpressure_weights(qlen: Callable[[str, str], float], link: Link,
                         commodities: Sequence[str]) -> Tuple[Optional[str], float]:
    """Best commodity on a link and its queue differential (may be <= 0)."""
    m, n = link
    best, best_w = None, float("-inf")
    for j in sorted(commodities):
        w = qlen(m, j) - qlen(n, j)
        if w > best_w:
            best, best_w = j, w
    if best is None:
        return None, 0.0
    return best, best_w


def _is_line(links: Sequence[Link]) -> Optional[List[Link]]:
    """Order undirected link pairs into a path; None if the cluster is not a line."""
    und = {}
    for (a, b) in links:
        und[frozenset((a, b))] = None
    deg = {}
    for e in und:
        for n in e:
            deg[n] = deg.get(n, 0) + 1
    if not deg or any(d > 2 for d in deg.values()):
        return None
    ends = sorted(n for n, d in deg.items() if d == 1)
    if len(ends) != 2:
        return None
    # walk from the lexicographically first end
    path, prev, cur = [], None, ends[0]
    edges = list(und)
    while True:
        nxt = None
        for e in edges:
            if cur in e:
                other = next(iter(e - {cur}))
                if other != prev:
                    nxt = other
                    path.append(tuple(sorted((cur, other))))
                    break
        if nxt is None:
            break
        prev, cur = cur, nxt
    if len(path) != len(und):
        return None
    return path


def _greedy_matching(weighted: List[Tuple[float, Link]]) -> List[Link]:
    used, picked = set(), []
    for w, (a, b) in sorted(weighted, key=lambda x: (-x[0], x[1])):
        if a in used or b in used:
            continue
        used.add(a)
        used.add(b)
        picked.append((a, b))
    return picked


def _exact_matching(weighted: List[Tuple[float, Link]]) -> List[Link]:
    best_set, best_val = [], 0.0
    items = sorted(weighted, key=lambda x: x[1])
    for r in range(1, len(items) + 1):
        for combo in combinations(items, r):
            used = set()
            ok = True
            for _, (a, b) in combo:
                if a in used or b in used:
                    ok = False
                    break
                used.add(a)
                used.add(b)
            if ok:
                val = sum(w for w, _ in combo)
                if val > best_val + 1e-12:
                    best_val = val
                    best_set = [l for _, l in combo]
    return best_set


def _line_matching(weighted: List[Tuple[float, Link]]) -> Optional[List[Link]]:
    """Exact max-weight independent edge set on a path via dynamic programming."""
    pairs: Dict[frozenset, Tuple[float, Link]] = {}
    for w, l in weighted:
        key = frozenset(l)
        if key not in pairs or w > pairs[key][0]:
            pairs[key] = (w, l)
    order = _is_line([l for _, l in weighted])
    if order is None:
        return None
    seq = [pairs[frozenset(e)] for e in order if frozenset(e) in pairs]
    take, skip, chosen_take, chosen_skip = 0.0, 0.0, [], []
    for w, link in seq:
        new_take = skip + w
        new_chosen_take = chosen_skip + [link]
        if take >= skip:
            new_skip, new_chosen_skip = take, chosen_take
        else:
            new_skip, new_chosen_skip = skip, chosen_skip
        take, skip = new_take, new_skip
        chosen_take, chosen_skip = new_chosen_take, new_chosen_skip
    return chosen_take if take > skip else chosen_skip


def maxweight_schedule(queues, links: Sequence[Link], model: InterferenceModel,
                       commodities: Sequence[str] = None,
                       exact: bool = False) -> List[Tuple[Link, str, int]]:
    """One slot's activation set: (link, commodity, packets) triples.

    Only strictly positive weights activate; each activated link serves its
    argmax commodity at the link rate, capped by the packets available.
    """
    if commodities is None:
        commodities = sorted(queues.commodities())
    weighted, best_c = [], {}
    for link in links:
        c, w = backpressure_weights(queues.length, link, commodities)
        if c is not None and w > 0 and queues.length(link[0], c) > 0:
            weighted.append((w * model.link_rate, link))
            best_c[link] = c
    if not weighted:
        return []
    if model.kind == "independent_sets":
        wmap = dict(((l, w) for w, l in weighted))
        best_set, best_val = [], 0.0
        for family in model.sets:
            val = sum(wmap.get(tuple(l), 0.0) for l in family)
            if val > best_val + 1e-12:
                best_val = val
                best_set = [tuple(l) for l in family if tuple(l) in wmap]
        picked = best_set
    else:
        picked = _line_matching(weighted)
        if picked is None:
            if exact and len(weighted) <= 16:
                picked = _exact_matching(weighted)
            else:
                picked = _greedy_matching(weighted)
    rate = int(model.link_rate)
    out = []
    for link in sorted(picked):
        c = best_c[link]
        pkts = min(rate, queues.length(link[0], c))
        if pkts > 0:
            out.append((link, c, pkts))
    return out
