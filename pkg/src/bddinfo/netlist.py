"""Circuit ingestion: a BLIF subset, PLA covers, and circuit-to-BDD
construction.

Sequential circuits are handled by latch cutting: latch outputs become
pseudo primary inputs and latch data inputs become pseudo outputs, so
the combinational core is what gets built.  Input declaration order
defines the variable ids (first declared input is variable 0), which is
also the initial BDD order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .manager import AND, ONE, OR, ZERO, BddManager, NodeLimitError


class NetlistError(ValueError):
    """Base class for ingestion problems."""


class ParseError(NetlistError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UndefinedSignalError(NetlistError):
    pass


class CycleError(NetlistError):
    pass


class BuildLimitError(NetlistError):
    """Node ceiling hit while composing gate BDDs."""


@dataclass
class Gate:
    """Single-output cover: OR of the row cubes, complemented when the
    rows' output column is 0."""

    output: str
    inputs: list[str]
    rows: list[tuple[str, str]]   # (pattern over 01-, output char)


@dataclass
class Netlist:
    name: str
    inputs: list[str]
    outputs: list[str]
    gates: list[Gate] = field(default_factory=list)
    latches: list[tuple[str, str]] = field(default_factory=list)  # (data in, out)

    @property
    def cut_inputs(self) -> list[str]:
        """Primary inputs plus latch outputs, in declaration order."""
        return self.inputs + [q for _, q in self.latches]

    @property
    def cut_outputs(self) -> list[str]:
        """Primary outputs plus latch data inputs."""
        return self.outputs + [d for d, _ in self.latches]


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _logical_lines(text: str):
    """Yield (line number, tokens) with comments stripped and backslash
    continuations joined; the number is the first physical line's."""
    pending: list[str] = []
    start = 0
    for number, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not pending:
            start = number
        if line.endswith("\\"):
            pending.extend(line[:-1].split())
            continue
        tokens = pending + line.split()
        pending = []
        if tokens:
            yield start, tokens
    if pending:
        yield start, pending


def parse_blif(text: str) -> Netlist:
    """Parse the BLIF subset: .model/.inputs/.outputs/.names/.latch/.end."""
    name = ""
    inputs: list[str] = []
    outputs: list[str] = []
    gates: list[Gate] = []
    latches: list[tuple[str, str]] = []
    current: Gate | None = None
    ended = False
    for number, tokens in _logical_lines(text):
        if ended:
            raise ParseError("content after .end", number)
        head = tokens[0]
        if head.startswith("."):
            current = None
            if head == ".model":
                name = tokens[1] if len(tokens) > 1 else ""
            elif head == ".inputs":
                inputs.extend(tokens[1:])
            elif head == ".outputs":
                outputs.extend(tokens[1:])
            elif head == ".names":
                if len(tokens) < 2:
                    raise ParseError(".names needs an output signal", number)
                current = Gate(output=tokens[-1], inputs=tokens[1:-1], rows=[])
                gates.append(current)
            elif head == ".latch":
                if len(tokens) < 3:
                    raise ParseError(".latch needs input and output", number)
                latches.append((tokens[1], tokens[2]))
            elif head == ".end":
                ended = True
            else:
                raise ParseError(f"unsupported directive {head}", number)
            continue
        if current is None:
            raise ParseError(f"cover row outside .names: {' '.join(tokens)}", number)
        if len(current.inputs) == 0:
            if len(tokens) != 1 or tokens[0] not in ("0", "1"):
                raise ParseError("constant cover row must be a single 0 or 1", number)
            pattern, out = "", tokens[0]
        else:
            if len(tokens) != 2:
                raise ParseError("cover row must be '<pattern> <value>'", number)
            pattern, out = tokens
        if len(pattern) != len(current.inputs):
            raise ParseError(
                f"pattern {pattern!r} does not match {len(current.inputs)} inputs",
                number)
        if set(pattern) - {"0", "1", "-"}:
            raise ParseError(f"bad pattern character in {pattern!r}", number)
        if out not in ("0", "1"):
            raise ParseError(f"output value must be 0 or 1, got {out!r}", number)
        if current.rows and current.rows[0][1] != out:
            raise ParseError("mixed output phases within one .names cover", number)
        current.rows.append((pattern, out))
    netlist = Netlist(name=name, inputs=inputs, outputs=outputs,
                      gates=gates, latches=latches)
    _validate(netlist)
    return netlist


def parse_pla(text: str) -> Netlist:
    """Parse a PLA cover: .i/.o headers, optional .p/.ilb/.ob/.e, cube rows.

    Input columns are the declared variables left to right; an output
    column of 1 puts the cube in that output's cover ('0' and '~' leave
    it out).  Overlapping cubes OR together.
    """
    n_in = None
    n_out = None
    ilb: list[str] | None = None
    ob: list[str] | None = None
    cubes: list[tuple[str, str]] = []
    for number, tokens in _logical_lines(text):
        head = tokens[0]
        if head.startswith("."):
            if head == ".i":
                n_in = _int_argument(tokens, number)
            elif head == ".o":
                n_out = _int_argument(tokens, number)
            elif head == ".ilb":
                ilb = tokens[1:]
            elif head == ".ob":
                ob = tokens[1:]
            elif head in (".p", ".e", ".end"):
                pass
            else:
                raise ParseError(f"unsupported directive {head}", number)
            continue
        if n_in is None or n_out is None:
            raise ParseError("cube row before .i/.o headers", number)
        if len(tokens) == 2:
            inpart, outpart = tokens
        elif len(tokens) == 1 and n_out == 0:
            inpart, outpart = tokens[0], ""
        else:
            raise ParseError("cube row must be '<inputs> <outputs>'", number)
        if len(inpart) != n_in:
            raise ParseError(
                f"input part {inpart!r} has {len(inpart)} columns, expected {n_in}",
                number)
        if len(outpart) != n_out:
            raise ParseError(
                f"output part {outpart!r} has {len(outpart)} columns, expected {n_out}",
                number)
        if set(inpart) - {"0", "1", "-"}:
            raise ParseError(f"bad input character in {inpart!r}", number)
        if set(outpart) - {"0", "1", "~"}:
            raise ParseError(f"bad output character in {outpart!r}", number)
        cubes.append((inpart, outpart))
    if n_in is None or n_out is None:
        raise ParseError("missing .i/.o headers")
    inputs = ilb if ilb is not None else [f"x{i + 1}" for i in range(n_in)]
    outputs = ob if ob is not None else [f"f{j}" for j in range(n_out)]
    if len(inputs) != n_in:
        raise ParseError(f".ilb names {len(inputs)} inputs, .i says {n_in}")
    if len(outputs) != n_out:
        raise ParseError(f".ob names {len(outputs)} outputs, .o says {n_out}")
    gates = []
    for j, out_name in enumerate(outputs):
        rows = [(inpart, "1") for inpart, outpart in cubes if outpart[j] == "1"]
        gates.append(Gate(output=out_name, inputs=list(inputs), rows=rows))
    netlist = Netlist(name="", inputs=list(inputs), outputs=list(outputs),
                      gates=gates)
    _validate(netlist)
    return netlist


def _int_argument(tokens: list[str], number: int) -> int:
    if len(tokens) < 2:
        raise ParseError(f"{tokens[0]} needs a count", number)
    try:
        value = int(tokens[1])
    except ValueError:
        raise ParseError(f"{tokens[0]} count {tokens[1]!r} is not an integer",
                         number) from None
    if value < 0:
        raise ParseError(f"{tokens[0]} count must be nonnegative", number)
    return value


def _validate(netlist: Netlist) -> None:
    """Check signal definitions, reject cycles, topo-sort the gates."""
    available = set(netlist.cut_inputs)
    defined: dict[str, Gate] = {}
    for gate in netlist.gates:
        if gate.output in defined or gate.output in available:
            raise ParseError(f"signal {gate.output!r} defined twice")
        defined[gate.output] = gate
    for gate in netlist.gates:
        for sig in gate.inputs:
            if sig not in available and sig not in defined:
                raise UndefinedSignalError(
                    f"gate {gate.output!r} reads undefined signal {sig!r}")
    for sig in netlist.cut_outputs:
        if sig not in available and sig not in defined:
            raise UndefinedSignalError(f"output {sig!r} is never defined")
    # Kahn's algorithm, stable in declaration order.
    order_index = {gate.output: i for i, gate in enumerate(netlist.gates)}
    remaining = {gate.output: set(s for s in gate.inputs if s in defined)
                 for gate in netlist.gates}
    sorted_gates: list[Gate] = []
    ready = sorted((out for out, deps in remaining.items() if not deps),
                   key=order_index.get)
    while ready:
        out = ready.pop(0)
        sorted_gates.append(defined[out])
        del remaining[out]
        for other, deps in remaining.items():
            deps.discard(out)
            if not deps and other not in ready:
                ready.append(other)
        ready.sort(key=order_index.get)
    if remaining:
        cycle = sorted(remaining)
        raise CycleError(f"combinational cycle through {', '.join(cycle)}")
    netlist.gates = sorted_gates


def format_blif(netlist: Netlist) -> str:
    """Canonical BLIF text; parsing it back yields an equal Netlist."""
    lines = [f".model {netlist.name}" if netlist.name else ".model"]
    if netlist.inputs:
        lines.append(".inputs " + " ".join(netlist.inputs))
    if netlist.outputs:
        lines.append(".outputs " + " ".join(netlist.outputs))
    for data_in, out in netlist.latches:
        lines.append(f".latch {data_in} {out}")
    for gate in netlist.gates:
        lines.append(".names " + " ".join(gate.inputs + [gate.output]))
        for pattern, out in gate.rows:
            lines.append(f"{pattern} {out}" if pattern else out)
    lines.append(".end")
    return "\n".join(lines) + "\n"


def manager_for(netlist: Netlist, node_limit: int | None = None) -> BddManager:
    """Manager sized for the latch-cut circuit, one variable per input."""
    return BddManager(len(netlist.cut_inputs), node_limit=node_limit)


def build_circuit_bdds(netlist: Netlist, manager: BddManager) -> dict[str, int]:
    """Compose the gate BDDs in topological order.

    Returns a mapping from every cut output to its registered root.  A
    manager node limit turns into a BuildLimitError naming the gate
    where the ceiling was hit.
    """
    cut_inputs = netlist.cut_inputs
    if manager.n != len(cut_inputs):
        raise NetlistError(
            f"manager has {manager.n} variables, circuit needs {len(cut_inputs)}")
    signal: dict[str, int] = {}
    try:
        for var, name in enumerate(cut_inputs):
            signal[name] = manager.literal(var)
    except NodeLimitError as exc:
        raise BuildLimitError(
            f"node limit reached while building input {name!r}") from exc
    for gate in netlist.gates:
        try:
            signal[gate.output] = _gate_bdd(manager, gate, signal)
        except NodeLimitError as exc:
            raise BuildLimitError(
                f"node limit reached while building gate {gate.output!r}") from exc
    roots: dict[str, int] = {}
    for name in netlist.cut_outputs:
        ref = signal[name]
        manager.register_root(ref)
        roots[name] = ref
    return roots


def _gate_bdd(manager: BddManager, gate: Gate, signal: dict[str, int]) -> int:
    cover = ZERO
    for pattern, _ in gate.rows:
        cube = ONE
        for sig_name, ch in zip(gate.inputs, pattern):
            if ch == "-":
                continue
            lit = signal[sig_name]
            if ch == "0":
                lit = manager.negate(lit)
            cube = manager.apply(AND, cube, lit)
        cover = manager.apply(OR, cover, cube)
    if gate.rows and gate.rows[0][1] == "0":
        cover = manager.negate(cover)
    return cover
