"""Synthetic benchmark model families.

Two generators: grids of parallel branches (worst-case state-space growth)
and chains of three repeating block shapes (linear growth).  Both emit
deterministic IDs and coordinates, so the same parameters always serialize
to byte-identical XML.
"""

from __future__ import annotations

from .model import FlowNode, NodeKind, Process, ProcessModel, SequenceFlow, build_model


def generate_parallel(n: int, m: int) -> ProcessModel:
    """start -> parallel split -> ``n`` branches of ``m`` chained tasks -> join -> end.

    The reachable state space has exactly ``(m + 1) ** n + 3`` states: one
    position per branch token between the gateways, plus the pre-split,
    post-join, and completed states.
    """
    if n < 1 or m < 1:
        raise ValueError("branch count and branch length must be >= 1")

    nodes: list[FlowNode] = []
    flows: list[SequenceFlow] = []
    coords: dict[str, tuple[float, float]] = {}
    mid_y = 80.0 + 120.0 * (n - 1) / 2.0

    nodes.append(FlowNode("start", NodeKind.NONE_START, "start"))
    coords["start"] = (100.0, mid_y)
    nodes.append(FlowNode("split", NodeKind.PARALLEL_GATEWAY, "split"))
    coords["split"] = (240.0, mid_y)
    flows.append(SequenceFlow("sf_start", "start", "split"))

    for i in range(1, n + 1):
        y = 80.0 + 120.0 * (i - 1)
        prev = "split"
        for j in range(1, m + 1):
            tid = f"t_{i}_{j}"
            nodes.append(FlowNode(tid, NodeKind.TASK, f"T{i}.{j}"))
            coords[tid] = (380.0 + 160.0 * (j - 1), y)
            flows.append(SequenceFlow(f"sf_{i}_{j - 1}", prev, tid))
            prev = tid
        flows.append(SequenceFlow(f"sf_{i}_{m}", prev, "join"))

    join_x = 380.0 + 160.0 * m
    nodes.append(FlowNode("join", NodeKind.PARALLEL_GATEWAY, "join"))
    coords["join"] = (join_x, mid_y)
    nodes.append(FlowNode("end", NodeKind.NONE_END, "end"))
    coords["end"] = (join_x + 140.0, mid_y)
    flows.append(SequenceFlow("sf_end", "join", "end"))

    process = Process(f"parallel_{n}_{m}", tuple(nodes), tuple(flows))
    return build_model([process], diagram=coords)


def generate_blocks(k: int) -> ProcessModel:
    """start -> ``k`` blocks in the repeating order 1, 2, 3, 1, ... -> end.

    Block 1 is an exclusive split/join around two one-task branches, block 2
    the parallel variant, block 3 a two-task sequence.  All chains are sound
    and safe by construction.
    """
    if k < 1:
        raise ValueError("block count must be >= 1")

    nodes: list[FlowNode] = []
    flows: list[SequenceFlow] = []
    coords: dict[str, tuple[float, float]] = {}
    y = 200.0

    nodes.append(FlowNode("start", NodeKind.NONE_START, "start"))
    coords["start"] = (100.0, y)
    prev = "start"
    x = 100.0

    for b in range(1, k + 1):
        shape = (b - 1) % 3 + 1
        p = f"b{b}"
        if shape in (1, 2):
            gw = NodeKind.EXCLUSIVE_GATEWAY if shape == 1 else NodeKind.PARALLEL_GATEWAY
            nodes.append(FlowNode(f"{p}_split", gw))
            nodes.append(FlowNode(f"{p}_t1", NodeKind.TASK, f"{p} upper"))
            nodes.append(FlowNode(f"{p}_t2", NodeKind.TASK, f"{p} lower"))
            nodes.append(FlowNode(f"{p}_join", gw))
            coords[f"{p}_split"] = (x + 140.0, y)
            coords[f"{p}_t1"] = (x + 280.0, y - 90.0)
            coords[f"{p}_t2"] = (x + 280.0, y + 90.0)
            coords[f"{p}_join"] = (x + 420.0, y)
            flows.append(SequenceFlow(f"{p}_in", prev, f"{p}_split"))
            flows.append(SequenceFlow(f"{p}_s1", f"{p}_split", f"{p}_t1"))
            flows.append(SequenceFlow(f"{p}_s2", f"{p}_split", f"{p}_t2"))
            flows.append(SequenceFlow(f"{p}_j1", f"{p}_t1", f"{p}_join"))
            flows.append(SequenceFlow(f"{p}_j2", f"{p}_t2", f"{p}_join"))
            prev = f"{p}_join"
            x += 420.0
        else:
            nodes.append(FlowNode(f"{p}_t1", NodeKind.TASK, f"{p} first"))
            nodes.append(FlowNode(f"{p}_t2", NodeKind.TASK, f"{p} second"))
            coords[f"{p}_t1"] = (x + 140.0, y)
            coords[f"{p}_t2"] = (x + 280.0, y)
            flows.append(SequenceFlow(f"{p}_in", prev, f"{p}_t1"))
            flows.append(SequenceFlow(f"{p}_m", f"{p}_t1", f"{p}_t2"))
            prev = f"{p}_t2"
            x += 280.0

    nodes.append(FlowNode("end", NodeKind.NONE_END, "end"))
    coords["end"] = (x + 140.0, y)
    flows.append(SequenceFlow("sf_end", prev, "end"))

    process = Process(f"blocks_{k}", tuple(nodes), tuple(flows))
    return build_model([process], diagram=coords)
