"""Deterministic simulated node network running the sharing system.

Nodes are plain records mutated by single-threaded functions; a broadcast
is an iteration over the node table.  There is no wire transport on
purpose: the point of the simulation is exhaustive, reproducible checks of
what travels where, which sockets would only obscure.

Public data lives in the registry (modulus, thresholds, every x, group
membership, the groups' hash identities).  Private data lives only in node
stores: each node's primary share value, its own group sub-share, and any
foreign sub-shares it happens to host.  A group never records who holds
its external sub-share; the holder is found again at repair time by
broadcasting the group's hash identity, and the holder itself knows the
digest but not the group behind it.

All randomness flows from one master seed through named sub-streams
(identity, sharing, per-group lambda and sub-sharing, placement), so the
same seed reproduces byte-identical registries, stores, and traces.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from . import groups as grouping
from . import shamir
from .errors import (
    AuthorizationError,
    ConfigurationError,
    DomainError,
    HolderLostError,
    InsufficientPointsError,
    IntegrityError,
    PlacementError,
)
from .field import DEFAULT_MODULUS, PrimeField
from .groups import GroupSpec, WeakRedundancy
from .seeds import derive_rng
from .shamir import Share, SharingParams

PLACEMENT_RANDOM = "random"
PLACEMENT_ANTI_RECIPROCAL = "anti-reciprocal"
PLACEMENT_RECIPROCAL = "reciprocal"
PLACEMENT_NONE = "none"

PLACEMENT_MODES = (
    PLACEMENT_RANDOM,
    PLACEMENT_ANTI_RECIPROCAL,
    PLACEMENT_RECIPROCAL,
    PLACEMENT_NONE,
)

_HW_BITS = 48

REGISTRY_FILE = "registry.json"
NODE_DIR = "nodes"


@dataclass(frozen=True)
class NodeIdentity:
    """Participant index plus a unique 48-bit hardware-style identifier."""

    node_id: int
    hw_id: int


@dataclass
class NodeStore:
    """Private store of one node.

    A healthy in-group node holds exactly two private field elements of its
    own system role: the primary share value and its group sub-share.
    Hosted foreign sub-shares carry only a digest, no group attribution.
    Failure erases all three collections; the hardware id survives.
    """

    identity: NodeIdentity
    primary: Share | None
    subshare: Share | None
    hosted: list[tuple[str, Share]]

    @property
    def failed(self) -> bool:
        return self.primary is None


@dataclass
class GroupRecord:
    """Public per-group registry entry.

    x_lambda is None and sss_x empty when the system was built without
    repair redundancy (bare threshold sharing).
    """

    spec: GroupSpec
    x_lambda: int | None
    sss_x: tuple[int, ...]
    digest_hex: str


@dataclass
class SystemState:
    """One complete simulated system: public registry plus all node stores."""

    field: PrimeField
    k: int
    n: int
    m: int
    placement_mode: str
    participants: dict[int, int]
    groups: dict[int, GroupRecord]
    nodes: dict[int, NodeStore]
    group_of: dict[int, int]

    @property
    def gamma(self) -> int:
        return self.n // self.m

    def group_digests(self) -> dict[str, int]:
        return {rec.digest_hex: g for g, rec in self.groups.items()}


_REDACTED_KEYS = frozenset({"y", "sub_y", "point_y"})


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    kind: str
    sender: int
    recipients: tuple[int, ...]
    payload: dict

    def summary(self) -> str:
        """Payload rendering; y values are redacted outside delivery lines."""
        parts = []
        for key, value in self.payload.items():
            if key in _REDACTED_KEYS and self.kind != "delivery":
                parts.append(f"{key}=[redacted]")
            else:
                parts.append(f"{key}={value}")
        return " ".join(parts)

    def line(self) -> str:
        if len(self.recipients) > 8:
            to = f"all:{len(self.recipients)}"
        else:
            to = ",".join(str(r) for r in self.recipients)
        return f"{self.seq:03d} | {self.kind} | {self.sender} | {to} | {self.summary()}"


class RepairTrace:
    """Ordered message record of one repair run."""

    def __init__(self):
        self.events: list[TraceEvent] = []

    def add(self, kind: str, sender: int, recipients: tuple[int, ...], **payload):
        self.events.append(
            TraceEvent(len(self.events), kind, sender, tuple(recipients), payload)
        )

    def lines(self) -> list[str]:
        return [event.line() for event in self.events]

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def hash_identity(hw_ids: Iterable[int]) -> str:
    """256-bit group identity from its members' hardware ids.

    Canonical encoding: ids sorted ascending, each as 6 bytes big-endian,
    concatenated, SHA-256.  Order-insensitive by construction; lowercase
    hex so registries compare bytewise.
    """
    ids = sorted(hw_ids)
    if not ids:
        raise DomainError("at least one hardware id required")
    for hw in ids:
        if not 0 <= hw < (1 << _HW_BITS):
            raise DomainError(f"hardware id {hw} does not fit in {_HW_BITS} bits")
    data = b"".join(hw.to_bytes(_HW_BITS // 8, "big") for hw in ids)
    return hashlib.sha256(data).hexdigest()


def _holder_of(state: SystemState, group_id: int) -> int | None:
    digest = state.groups[group_id].digest_hex
    for node_id in sorted(state.nodes):
        for hosted_digest, _ in state.nodes[node_id].hosted:
            if hosted_digest == digest:
                return node_id
    return None


def _pick_holder(
    state: SystemState,
    group_id: int,
    rng: random.Random,
    placed: dict[int, int],
    anti_reciprocal: bool,
) -> int:
    """Uniform draw from the admissible holders for one group.

    placed maps already-decided groups to their holders; with
    anti_reciprocal set, members of any group whose sub-share sits on one
    of this group's members are excluded (a mutual pair would arise).
    """
    members = set(state.groups[group_id].spec.member_ids)
    candidates = [i for i in sorted(state.nodes) if i not in members]
    if anti_reciprocal:
        barred: set[int] = set()
        for other_id, holder in placed.items():
            if other_id != group_id and holder in members:
                barred |= set(state.groups[other_id].spec.member_ids)
        candidates = [c for c in candidates if c not in barred]
    if not candidates:
        raise PlacementError(f"no admissible holder for group {group_id}")
    return candidates[rng.randrange(len(candidates))]


def place_external(
    state: SystemState,
    group_id: int,
    subshare: Share,
    rng: random.Random,
    anti_reciprocal: bool = False,
) -> int:
    """Place a group's external sub-share on a random node outside the group.

    The holder records (digest, sub-share) and nothing else; the group
    records nothing at all about the holder.  With anti_reciprocal set,
    any choice that would create a pair of groups hosting each other's
    redundancy is excluded before drawing.
    """
    placed = {}
    for other_id in state.groups:
        holder = _holder_of(state, other_id)
        if holder is not None:
            placed[other_id] = holder
    group = state.groups[group_id]
    holder_id = _pick_holder(state, group_id, rng, placed, anti_reciprocal)
    state.nodes[holder_id].hosted.append((group.digest_hex, subshare))
    return holder_id


_PLACEMENT_ATTEMPTS = 100


def _place_all(
    state: SystemState,
    external: dict[int, Share],
    rng: random.Random,
    anti_reciprocal: bool,
):
    """Assign every group's external sub-share in one placement round.

    A sequential anti-reciprocal round can dead-end (earlier groups may bar
    every candidate of a later one), so the round is staged and redrawn
    until consistent; the rng stream continues across attempts, keeping the
    result a pure function of the seed.
    """
    for _ in range(_PLACEMENT_ATTEMPTS):
        staged: dict[int, int] = {}
        try:
            for group_id in sorted(state.groups):
                staged[group_id] = _pick_holder(
                    state, group_id, rng, staged, anti_reciprocal
                )
        except PlacementError:
            if anti_reciprocal:
                continue
            raise
        for group_id, holder_id in staged.items():
            state.nodes[holder_id].hosted.append(
                (state.groups[group_id].digest_hex, external[group_id])
            )
        return
    raise PlacementError(
        f"no admissible placement found in {_PLACEMENT_ATTEMPTS} rounds"
    )


def system_setup(
    k: int,
    n: int,
    m: int,
    secret: int,
    seed: int,
    *,
    modulus: int = DEFAULT_MODULUS,
    placement: str = PLACEMENT_RANDOM,
    anti_reciprocal: bool = False,
) -> SystemState:
    """Build a complete system: global split, per-group redundancy, placement.

    Per group the repairing polynomial is interpolated from the member
    shares, one fresh point on it is drawn as the weak redundancy, the
    point's value is second-shared (gamma, gamma+1), the member sub-shares
    are handed out, and the external one is placed per the placement mode.
    The polynomial itself and its coefficient list are then discarded.

    placement='none' skips all redundancy (bare threshold fixture);
    'reciprocal' forces groups 1 and 2 to host each other's sub-share, the
    worst-case fixture of the compromise analysis.  Deterministic per seed.
    """
    if anti_reciprocal:
        if placement not in (PLACEMENT_RANDOM, PLACEMENT_ANTI_RECIPROCAL):
            raise ConfigurationError(
                f"anti_reciprocal flag conflicts with placement={placement!r}"
            )
        placement = PLACEMENT_ANTI_RECIPROCAL
    if placement not in PLACEMENT_MODES:
        raise ConfigurationError(f"unknown placement mode {placement!r}")
    if seed is None:
        raise ConfigurationError("a seed is required; no ambient entropy is used")

    field = PrimeField(modulus)
    if modulus <= n + m + 2:
        raise ConfigurationError(
            f"modulus {modulus} too small for n={n}, m={m}: need modulus > n + m + 2"
        )
    specs = grouping.partition(n, m)
    gamma = n // m
    if placement == PLACEMENT_RECIPROCAL and m < 2:
        raise ConfigurationError("reciprocal placement needs at least two groups")
    params = SharingParams.with_default_assignment(k, n)

    id_rng = derive_rng(seed, "identity")
    hw_ids: dict[int, int] = {}
    seen: set[int] = set()
    for node_id in range(1, n + 1):
        while True:
            hw = id_rng.getrandbits(_HW_BITS)
            if hw not in seen:
                break
        seen.add(hw)
        hw_ids[node_id] = hw

    shares = shamir.split(field, secret, params, derive_rng(seed, "sharing"))
    nodes = {
        i: NodeStore(
            identity=NodeIdentity(i, hw_ids[i]),
            primary=shares[i - 1],
            subshare=None,
            hosted=[],
        )
        for i in range(1, n + 1)
    }

    group_records: dict[int, GroupRecord] = {}
    group_of: dict[int, int] = {}
    external: dict[int, Share] = {}
    for spec in specs:
        for member in spec.member_ids:
            group_of[member] = spec.group_id
        digest = hash_identity(hw_ids[mid] for mid in spec.member_ids)
        if placement == PLACEMENT_NONE:
            group_records[spec.group_id] = GroupRecord(spec, None, (), digest)
            continue
        member_shares = [shares[mid - 1] for mid in spec.member_ids]
        repair_fn = grouping.build_repair_function(field, member_shares)
        weak = grouping.make_weak_redundancy(
            field,
            repair_fn,
            {s.x for s in member_shares},
            derive_rng(seed, f"lambda:{spec.group_id}"),
        )
        sss = grouping.setup_sss(
            field, weak.y, gamma, derive_rng(seed, f"sss:{spec.group_id}")
        )
        for idx, member in enumerate(spec.member_ids):
            nodes[member].subshare = sss[idx]
        external[spec.group_id] = sss[-1]
        group_records[spec.group_id] = GroupRecord(
            spec, weak.x, tuple(range(1, gamma + 2)), digest
        )

    state = SystemState(
        field=field,
        k=k,
        n=n,
        m=m,
        placement_mode=placement,
        participants={i: shares[i - 1].x for i in range(1, n + 1)},
        groups=group_records,
        nodes=nodes,
        group_of=group_of,
    )

    if placement != PLACEMENT_NONE:
        place_rng = derive_rng(seed, "placement")
        if placement == PLACEMENT_RECIPROCAL:
            pair = (1, 2)
            for group_id, other_id in (pair, pair[::-1]):
                others = state.groups[other_id].spec.member_ids
                holder_id = others[place_rng.randrange(len(others))]
                nodes[holder_id].hosted.append(
                    (group_records[group_id].digest_hex, external[group_id])
                )
            rest = {
                g: sub for g, sub in external.items() if g not in pair
            }
            if rest:
                _place_rest(state, rest, place_rng)
        else:
            anti = placement == PLACEMENT_ANTI_RECIPROCAL
            _place_all(state, external, place_rng, anti_reciprocal=anti)
    return state


def _place_rest(state: SystemState, external: dict[int, Share], rng: random.Random):
    for group_id in sorted(external):
        place_external(state, group_id, external[group_id], rng)


def mark_failed(state: SystemState, node_id: int):
    """Erase a node's private data (hardware id is retained)."""
    node = state.nodes.get(node_id)
    if node is None:
        raise ConfigurationError(f"unknown node {node_id}")
    if node.failed:
        raise ConfigurationError(f"node {node_id} has already failed")
    node.primary = None
    node.subshare = None
    node.hosted = []


def lookup_holder(state: SystemState, digest_hex: str) -> tuple[int, Share]:
    """Broadcast a digest: every node checks its hosted records.

    Exactly one node must respond in a well-formed system; zero responders
    means the external sub-share is lost with its holder, more than one is
    a placement integrity violation.
    """
    responders = []
    for node_id in sorted(state.nodes):
        for hosted_digest, sub in state.nodes[node_id].hosted:
            if hosted_digest == digest_hex:
                responders.append((node_id, sub))
    if not responders:
        raise HolderLostError(f"no holder responded to digest {digest_hex[:16]}...")
    if len(responders) > 1:
        raise IntegrityError(
            f"{len(responders)} holders responded to digest {digest_hex[:16]}..."
        )
    return responders[0]


def request_repair(
    state: SystemState,
    proposer: NodeIdentity,
    failed_id: int,
    withhold_acks: Iterable[int] = (),
) -> tuple[Share, Share, RepairTrace]:
    """Run the full repair protocol for one failed participant.

    The proposer (the failed node's replacement, same hardware id) asks its
    group peers for authorization, broadcasts the group digest to find the
    external sub-share, recovers the weak redundancy from gamma sub-shares,
    interpolates the repairing polynomial from the surviving member points
    plus the weak point, and computes the lost share value, which is
    revealed to the proposer alone.  The failed node's own sub-share is
    restored from the same gamma sub-shares.  The state is updated in place
    and the full message trace returned.
    """
    node = state.nodes.get(failed_id)
    if node is None:
        raise ConfigurationError(f"unknown node {failed_id}")
    if not node.failed:
        raise ConfigurationError(f"node {failed_id} is healthy; nothing to repair")
    if proposer.node_id != failed_id or proposer.hw_id != node.identity.hw_id:
        raise AuthorizationError(
            f"proposer identity does not match registered node {failed_id}"
        )
    group = state.groups[state.group_of[failed_id]]
    if group.x_lambda is None:
        raise ConfigurationError(
            f"group {group.spec.group_id} carries no repair redundancy"
        )
    gamma = state.gamma
    survivors = [mid for mid in group.spec.member_ids if mid != failed_id]
    dead = [mid for mid in survivors if state.nodes[mid].failed]
    if dead:
        raise InsufficientPointsError(
            f"group {group.spec.group_id} has additional failures {dead}; "
            "local repair supports one failure at a time"
        )
    withheld = set(withhold_acks) & set(survivors)
    if withheld:
        raise AuthorizationError(
            f"members {sorted(withheld)} did not authorize the repair"
        )

    failed_x = state.participants[failed_id]
    trace = RepairTrace()
    trace.add("request", failed_id, tuple(survivors), failed=failed_id, x=failed_x)
    for mid in survivors:
        trace.add("ack", mid, (failed_id,), failed=failed_id)

    everyone_else = tuple(i for i in sorted(state.nodes) if i != failed_id)
    trace.add("digest-broadcast", failed_id, everyone_else, digest=group.digest_hex)
    holder_id, external_sub = lookup_holder(state, group.digest_hex)
    trace.add(
        "holder-response",
        holder_id,
        (failed_id,),
        sub_x=external_sub.x,
        sub_y=external_sub.y,
    )

    for mid in survivors:
        peer = state.nodes[mid]
        trace.add(
            "contribution",
            mid,
            (failed_id,),
            sub_x=peer.subshare.x,
            sub_y=peer.subshare.y,
            point_x=peer.primary.x,
            point_y=peer.primary.y,
        )

    subshares = [state.nodes[mid].subshare for mid in survivors] + [external_sub]
    sub_secret = shamir.recover(state.field, subshares, gamma)
    trace.add(
        "interpolation",
        failed_id,
        (failed_id,),
        points=gamma,
        x_lambda=group.x_lambda,
    )
    surviving_points = [state.nodes[mid].primary for mid in survivors]
    repaired_y = grouping.repair_share(
        state.field,
        surviving_points,
        WeakRedundancy(group.x_lambda, sub_secret),
        failed_x,
        gamma,
    )
    trace.add("delivery", failed_id, (failed_id,), x=failed_x, y=repaired_y)

    failed_sss_x = group.sss_x[group.spec.member_ids.index(failed_id)]
    restored_sub = grouping.restore_subshare(state.field, subshares, failed_sss_x, gamma)
    trace.add("subshare-restore", failed_id, (failed_id,), sub_x=failed_sss_x)

    repaired = Share(failed_x, repaired_y)
    node.primary = repaired
    node.subshare = restored_sub
    return repaired, restored_sub, trace


def recover_secret(state: SystemState, participant_ids: Iterable[int]) -> int:
    """Recover the global secret from the listed live participants' shares."""
    ids = sorted(set(participant_ids))
    shares = []
    for node_id in ids:
        node = state.nodes.get(node_id)
        if node is None:
            raise ConfigurationError(f"unknown node {node_id}")
        if node.failed:
            raise ConfigurationError(f"node {node_id} has failed and holds no share")
        shares.append(node.primary)
    return shamir.recover(state.field, shares, state.k)


def storage_accounting(state: SystemState) -> dict:
    """Count private field elements per node and system-wide.

    Own-role elements are the primary share value and the node's group
    sub-share; hosted foreign sub-shares are counted separately.  A full
    system with redundancy stores 2n + m private elements in total.
    """
    per_node = {}
    for node_id in sorted(state.nodes):
        node = state.nodes[node_id]
        own = int(node.primary is not None) + int(node.subshare is not None)
        per_node[node_id] = {"own_role": own, "hosted": len(node.hosted)}
    total = sum(v["own_role"] + v["hosted"] for v in per_node.values())
    return {"per_node": per_node, "total_private_elements": total}


# -- flat-file persistence ----------------------------------------------------


def _fe(value: int) -> str:
    return str(value)


def registry_dict(state: SystemState) -> dict:
    """The public registry: no y values, no sub-shares, no holder locations."""
    return {
        "modulus": state.field.modulus,
        "k": state.k,
        "n": state.n,
        "m": state.m,
        "placement_mode": state.placement_mode,
        "participants": [
            {
                "id": node_id,
                "x": _fe(state.participants[node_id]),
                "hw_id": f"{state.nodes[node_id].identity.hw_id:012x}",
            }
            for node_id in sorted(state.nodes)
        ],
        "groups": [
            {
                "id": group_id,
                "members": list(rec.spec.member_ids),
                "x_lambda": None if rec.x_lambda is None else _fe(rec.x_lambda),
                "sss_x": [_fe(x) for x in rec.sss_x],
                "digest_hex": rec.digest_hex,
            }
            for group_id, rec in sorted(state.groups.items())
        ],
    }


def node_store_dict(node: NodeStore) -> dict:
    def share_dict(share: Share | None):
        if share is None:
            return None
        return {"x": _fe(share.x), "y": _fe(share.y)}

    return {
        "id": node.identity.node_id,
        "y": None if node.primary is None else _fe(node.primary.y),
        "sss_subshare": share_dict(node.subshare),
        "hosted": [
            {"digest_hex": digest, "subshare": share_dict(sub)}
            for digest, sub in node.hosted
        ],
    }


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_state(state: SystemState, directory: str | Path):
    """Write registry.json plus one store file per node."""
    root = Path(directory)
    node_dir = root / NODE_DIR
    node_dir.mkdir(parents=True, exist_ok=True)
    (root / REGISTRY_FILE).write_text(_dump(registry_dict(state)))
    width = len(str(state.n))
    for node_id in sorted(state.nodes):
        path = node_dir / f"node_{node_id:0{width}d}.json"
        path.write_text(_dump(node_store_dict(state.nodes[node_id])))


def load_state(directory: str | Path) -> SystemState:
    """Rebuild a SystemState from a directory written by save_state."""
    root = Path(directory)
    registry = json.loads((root / REGISTRY_FILE).read_text())
    field = PrimeField(registry["modulus"])
    n = registry["n"]
    width = len(str(n))

    participants = {}
    hw_ids = {}
    for entry in registry["participants"]:
        participants[entry["id"]] = int(entry["x"])
        hw_ids[entry["id"]] = int(entry["hw_id"], 16)

    group_records = {}
    group_of = {}
    for entry in registry["groups"]:
        spec = GroupSpec(group_id=entry["id"], member_ids=tuple(entry["members"]))
        for member in spec.member_ids:
            group_of[member] = spec.group_id
        x_lambda = None if entry["x_lambda"] is None else int(entry["x_lambda"])
        group_records[spec.group_id] = GroupRecord(
            spec, x_lambda, tuple(int(x) for x in entry["sss_x"]), entry["digest_hex"]
        )

    nodes = {}
    for node_id in sorted(participants):
        raw = json.loads(
            (root / NODE_DIR / f"node_{node_id:0{width}d}.json").read_text()
        )
        primary = (
            None
            if raw["y"] is None
            else Share(participants[node_id], int(raw["y"]))
        )
        sub = raw["sss_subshare"]
        subshare = None if sub is None else Share(int(sub["x"]), int(sub["y"]))
        hosted = [
            (h["digest_hex"], Share(int(h["subshare"]["x"]), int(h["subshare"]["y"])))
            for h in raw["hosted"]
        ]
        nodes[node_id] = NodeStore(
            identity=NodeIdentity(node_id, hw_ids[node_id]),
            primary=primary,
            subshare=subshare,
            hosted=hosted,
        )

    return SystemState(
        field=field,
        k=registry["k"],
        n=n,
        m=registry["m"],
        placement_mode=registry.get("placement_mode", PLACEMENT_RANDOM),
        participants=participants,
        groups=group_records,
        nodes=nodes,
        group_of=group_of,
    )
