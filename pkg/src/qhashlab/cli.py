"""Terminal front door: drive every operation from the shell.

Subcommands: bias, verify-tables, search, hash, inner, swap-test,
reverse-test, circuit-check, fingerprint, sign, verify,
forge-experiment.

Conventions shared by all commands: stochastic commands take --seed
(default 0) and echo it, so any run replays byte-identically from its
own report; --format json emits the same keys and numbers as the text
lines; floats are printed with repr so text and json carry identical
numeric content.  Exit codes: 0 success or target met, 1 target not
met (search budget exhausted, verification rejected, table row failed),
2 usage or parse errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import bias as bias_mod
from . import fingerprint as fp_mod
from . import keyset as keyset_mod
from . import qhash, qsim, signature as sig_mod

TABLE_BOUND = 0.01
ROUNDING_TOL = 5e-4


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return str(int(value))
    return str(value)


def _emit(fmt: str, pairs: list[tuple[str, object]], records: "dict[str, list] | None" = None) -> None:
    """Print a report: scalar pairs plus optional named record lists."""
    if fmt == "json":
        payload: dict[str, object] = {}
        if records:
            payload.update(records)
        payload.update(pairs)
        click.echo(json.dumps(payload))
        return
    if records:
        for lines in records.values():
            for line in lines:
                click.echo(line if isinstance(line, str) else " ".join(_fmt(v) for v in line))
    for key, value in pairs:
        click.echo(f"{key} {_fmt(value)}")


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_keyset(path: str) -> bias_mod.KeySetFile:
    try:
        return bias_mod.load_keyset(path)
    except (bias_mod.KeySetFormatError, OSError) as exc:
        _fail(str(exc))
        raise AssertionError  # unreachable


def _load_code(path: str) -> fp_mod.LinearCode:
    try:
        return fp_mod.load_code(path)
    except (fp_mod.CodeFormatError, OSError) as exc:
        _fail(str(exc))
        raise AssertionError  # unreachable


def _load_state(path: str) -> qsim.StateVector:
    try:
        return qsim.load_state(path)
    except (ValueError, OSError) as exc:
        _fail(str(exc))
        raise AssertionError  # unreachable


seed_option = click.option("--seed", type=int, default=0, show_default=True, help="RNG seed; echoed in the report.")
format_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
keyset_option = click.option("--keyset", "keyset_path", required=True, type=click.Path(dir_okay=False), help="Key-set file.")


@click.group()
def main() -> None:
    """Key-set bias, quantum hash states, equality tests, signatures."""


@main.command("bias")
@keyset_option
@click.option("--method", type=click.Choice(["direct", "fft"]), default="direct", show_default=True)
@format_option
def cmd_bias(keyset_path: str, method: str, fmt: str) -> None:
    """Bias profile of a key-set file."""
    loaded = _load_keyset(keyset_path)
    profile = bias_mod.bias_profile(loaded.keyset, method=method)
    padded_sq = bias_mod.padded_delta_squared(loaded.keyset, method=method)
    pairs: list[tuple[str, object]] = [
        ("N", profile.modulus),
        ("d", profile.d),
        ("delta", profile.delta),
        ("lambda", profile.lambda_),
        ("worst_shift_delta", profile.worst_shift_delta),
        ("worst_shift_lambda", profile.worst_shift_lambda),
        ("padded_delta_sq", padded_sq),
    ]
    if loaded.declared_epsilon is not None:
        pairs.append(("declared_epsilon", loaded.declared_epsilon))
    _emit(fmt, pairs)


@main.command("verify-tables")
@click.option("--fixtures", "fixtures_dir", type=click.Path(file_okay=False), default=None,
              help="Fixture directory; defaults to the bundled tables.")
@click.option("--max-n", "max_modulus", type=int, default=16384, show_default=True,
              help="Skip rows with modulus above this.")
@format_option
def cmd_verify_tables(fixtures_dir: str | None, max_modulus: int, fmt: str) -> None:
    """Recompute every bundled table row and check its declared bound.

    A row passes when the padded squared-overlap statistic both stays
    within the tables' 0.01 bound and matches the declared value to
    rounding (5e-4).  The unit-normalized delta(K) is reported beside
    it; for these odd-cardinality sets it is floored at 1/d and is not
    what the tables declare.
    """
    base = Path(fixtures_dir) if fixtures_dir is not None else keyset_mod.bundled_table_dir()
    rows = []
    warnings = []
    for path in sorted(base.glob("*.txt")):
        try:
            loaded = bias_mod.load_keyset(path)
        except (bias_mod.KeySetFormatError, OSError) as exc:
            warnings.append(f"warning: skipping {path.name}: {exc}")
            continue
        if loaded.keyset.modulus > max_modulus:
            continue
        rows.append((path.name, loaded))
    rows.sort(key=lambda item: (item[1].keyset.modulus, item[1].keyset.d))

    record_lines: list[str] = list(warnings)
    json_rows: list[dict[str, object]] = []
    passed = 0
    for name, loaded in rows:
        ks = loaded.keyset
        profile = bias_mod.bias_profile(ks)
        padded_sq = bias_mod.padded_delta_squared(ks)
        declared = loaded.declared_epsilon
        ok = padded_sq <= TABLE_BOUND and (
            declared is not None and abs(padded_sq - declared) <= ROUNDING_TOL
        )
        passed += ok
        status = "PASS" if ok else "FAIL"
        record_lines.append(
            f"row {name} N {ks.modulus} d {ks.d} declared {_fmt(declared)} "
            f"padded_sq {padded_sq!r} delta {profile.delta!r} status {status}"
        )
        json_rows.append(
            {
                "row": name,
                "N": ks.modulus,
                "d": ks.d,
                "declared": declared,
                "padded_sq": padded_sq,
                "delta": profile.delta,
                "status": status,
            }
        )
    if not rows:
        record_lines.append(f"warning: no table fixtures found under {base}")
    pairs = [("rows", len(rows)), ("passed", passed), ("failed", len(rows) - passed)]
    if fmt == "json":
        _emit(fmt, pairs, {"rows_detail": json_rows, "warnings": warnings})
    else:
        _emit(fmt, pairs, {"rows_detail": record_lines})
    sys.exit(0 if passed == len(rows) else 1)


@main.command("search")
@click.option("--mode", type=click.Choice(["random", "ga"]), required=True)
@click.option("--n", "modulus", type=int, required=True, help="Modulus N.")
@click.option("--d", type=int, default=None, help="Key count (ga mode).")
@click.option("--epsilon", type=float, default=None,
              help="Target bound: true delta for random mode, the search objective for ga.")
@click.option("--objective", type=click.Choice(list(keyset_mod.OBJECTIVES)), default="padded_sq",
              show_default=True, help="Statistic the GA drives (ga mode).")
@click.option("--max-attempts", type=int, default=100, show_default=True, help="Draws (random mode).")
@click.option("--population-size", type=int, default=64, show_default=True)
@click.option("--generations", type=int, default=500, show_default=True)
@click.option("--mutation-rate", type=float, default=0.1, show_default=True)
@click.option("--crossover-rate", type=float, default=0.7, show_default=True)
@click.option("--elitism-count", type=int, default=2, show_default=True)
@click.option("--progress", is_flag=True, help="Stream per-generation best values (ga mode).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@seed_option
@format_option
def cmd_search(mode: str, modulus: int, d: int | None, epsilon: float | None, objective: str,
               max_attempts: int, population_size: int, generations: int, mutation_rate: float,
               crossover_rate: float, elitism_count: int, progress: bool, out_path: str,
               seed: int, fmt: str) -> None:
    """Search for a key set and write it to a file."""
    rng = qsim.make_rng(seed)
    progress_lines: list[str] = []
    try:
        if mode == "random":
            if epsilon is None:
                _fail("random mode needs --epsilon")
            outcome = keyset_mod.sample_random_keyset(modulus, epsilon, max_attempts, rng)
        else:
            if d is None:
                _fail("ga mode needs --d")
            target = 0.01 if epsilon is None else epsilon
            config = keyset_mod.SearchConfig(
                population_size=population_size,
                generations=generations,
                mutation_rate=mutation_rate,
                crossover_rate=crossover_rate,
                elitism_count=elitism_count,
                rng_seed=seed,
            )
            sink = progress_lines.append if (progress or fmt == "json") else None
            if progress and fmt == "text":
                sink = click.echo
            outcome = keyset_mod.ga_search(
                modulus, d, target, config, rng, objective=objective, progress=sink
            )
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    bias_mod.save_keyset(outcome.keyset, out_path, declared_epsilon=outcome.achieved_objective)
    pairs: list[tuple[str, object]] = [
        ("mode", mode),
        ("N", modulus),
        ("d", outcome.keyset.d),
        ("seed", seed),
        ("objective", outcome.objective),
        ("achieved_delta", outcome.achieved_delta),
        ("achieved_objective", outcome.achieved_objective),
        ("generations_used", outcome.generations_used),
        ("target_met", outcome.target_met),
        ("out", out_path),
    ]
    records = {"progress": progress_lines} if (progress and fmt == "json") else None
    _emit(fmt, pairs, records)
    sys.exit(0 if outcome.target_met else 1)


@main.command("hash")
@keyset_option
@click.option("--message", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Dump the state, one '<index> <re> <im>' line per basis index.")
@click.option("--dump-circuit", "show_circuit", is_flag=True, help="Print the rotation circuit.")
@format_option
def cmd_hash(keyset_path: str, message: int, out_path: str | None, show_circuit: bool, fmt: str) -> None:
    """Build the hash state of a message."""
    loaded = _load_keyset(keyset_path)
    params = qhash.HashParams(loaded.keyset)
    try:
        state = qhash.hash_state(params, message)
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    records = None
    if show_circuit:
        if params.n is None:
            _fail(f"modulus {loaded.keyset.modulus} is not a power of two; no circuit form")
        circuit = qhash.build_hash_circuit(params, qhash.message_bits(message, params.n))
        records = {"circuit": qhash.dump_circuit(circuit).splitlines()}
    if out_path is not None:
        qsim.dump_state(state, out_path)
    pairs: list[tuple[str, object]] = [
        ("N", loaded.keyset.modulus),
        ("d", loaded.keyset.d),
        ("qubits", params.s),
        ("message", message),
    ]
    if out_path is not None:
        pairs.append(("out", out_path))
    _emit(fmt, pairs, records)


@main.command("inner")
@keyset_option
@click.option("--m1", type=int, required=True)
@click.option("--m2", type=int, required=True)
@format_option
def cmd_inner(keyset_path: str, m1: int, m2: int, fmt: str) -> None:
    """Analytic overlap of two hash states."""
    loaded = _load_keyset(keyset_path)
    try:
        ip = bias_mod.hash_inner_product(loaded.keyset, m1, m2)
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    _emit(fmt, [
        ("N", loaded.keyset.modulus),
        ("d", loaded.keyset.d),
        ("m1", m1),
        ("m2", m2),
        ("inner_product", ip),
        ("squared", ip * ip),
    ])


@main.command("swap-test")
@keyset_option
@click.option("--m1", type=int, required=True)
@click.option("--m2", type=int, required=True)
@click.option("--shots", type=int, default=10000, show_default=True)
@seed_option
@format_option
def cmd_swap_test(keyset_path: str, m1: int, m2: int, shots: int, seed: int, fmt: str) -> None:
    """SWAP-test the hash states of two messages."""
    loaded = _load_keyset(keyset_path)
    params = qhash.HashParams(loaded.keyset)
    try:
        psi = qhash.hash_state(params, m1)
        phi = qhash.hash_state(params, m2)
        counts = qsim.swap_test(psi, phi, shots, qsim.make_rng(seed))
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    _emit(fmt, [
        ("m1", m1),
        ("m2", m2),
        ("shots", shots),
        ("seed", seed),
        ("accept_probability", qsim.swap_test_accept_probability(psi, phi)),
        ("accepted", counts.accepted),
        ("rejected", counts.rejected),
        ("accept_rate", counts.accept_rate),
    ])


@main.command("reverse-test")
@keyset_option
@click.option("--claim", type=int, required=True, help="Claimed message v.")
@click.option("--message", type=int, default=None, help="Hash this message as the held state.")
@click.option("--state", "state_path", type=click.Path(dir_okay=False), default=None,
              help="Load the held state from a dump instead.")
@click.option("--shots", type=int, default=10000, show_default=True)
@seed_option
@format_option
def cmd_reverse_test(keyset_path: str, claim: int, message: int | None, state_path: str | None,
                     shots: int, seed: int, fmt: str) -> None:
    """Uncompute a claimed message against a held hash state."""
    if (message is None) == (state_path is None):
        _fail("need exactly one of --message or --state")
    loaded = _load_keyset(keyset_path)
    params = qhash.HashParams(loaded.keyset)
    try:
        psi = (
            qhash.hash_state(params, message)
            if message is not None
            else _load_state(state_path)
        )
        uncomputed = qhash.uncompute_hash(params, claim, psi)
        accept_probability = float(abs(uncomputed.amplitudes[0]) ** 2)
        counts = qhash.reverse_test_shots(params, claim, psi, shots, qsim.make_rng(seed))
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    pairs: list[tuple[str, object]] = [("claim", claim)]
    if message is not None:
        pairs.append(("message", message))
    else:
        pairs.append(("state", state_path))
    pairs += [
        ("shots", shots),
        ("seed", seed),
        ("accept_probability", accept_probability),
        ("accepted", counts.accepted),
        ("rejected", counts.rejected),
        ("accept_rate", counts.accept_rate),
    ]
    _emit(fmt, pairs)


@main.command("circuit-check")
@click.option("--keyset", "keyset_path", type=click.Path(dir_okay=False), default=None,
              help="Check this key set over random messages; omit to draw random sets too.")
@click.option("--n", "modulus", type=int, default=None, help="Modulus for random sets.")
@click.option("--d", type=int, default=None, help="Cardinality for random sets.")
@click.option("--count", type=int, default=100, show_default=True)
@seed_option
@format_option
def cmd_circuit_check(keyset_path: str | None, modulus: int | None, d: int | None,
                      count: int, seed: int, fmt: str) -> None:
    """Compare the rotation circuit against the analytic state."""
    rng = qsim.make_rng(seed)
    fixed = None
    if keyset_path is not None:
        fixed = _load_keyset(keyset_path).keyset
        if fixed.modulus & (fixed.modulus - 1):
            _fail(f"modulus {fixed.modulus} is not a power of two; no circuit form")
    elif modulus is None or d is None:
        _fail("need --keyset, or --n and --d for random sets")
    elif modulus & (modulus - 1) or modulus < 2:
        _fail(f"modulus {modulus} is not a power of two; no circuit form")
    worst = 0.0
    for _ in range(count):
        ks = fixed
        if ks is None:
            keys = tuple(int(k) for k in rng.integers(0, modulus, size=d))
            ks = bias_mod.KeySet(modulus=modulus, keys=keys)
        params = qhash.HashParams(ks)
        m = int(rng.integers(0, ks.modulus))
        analytic = qhash.hash_state(params, m)
        circuit = qhash.build_hash_circuit(params, qhash.message_bits(m, params.n))
        simulated = qhash.simulate_circuit(circuit)
        worst = max(worst, float(np.max(np.abs(simulated.amplitudes - analytic.amplitudes))))
    ok = worst < 1e-10
    _emit(fmt, [
        ("count", count),
        ("seed", seed),
        ("max_deviation", worst),
        ("ok", ok),
    ])
    sys.exit(0 if ok else 1)


@main.command("fingerprint")
@click.option("--code", "code_path", type=click.Path(dir_okay=False), default=None,
              help="Code file; omit to draw a random code with --n/--m.")
@click.option("--n", "n_bits", type=int, default=None)
@click.option("--m", "m_bits", type=int, default=None)
@click.option("--u", required=True, help="First message, as bits.")
@click.option("--v", required=True, help="Second message, as bits.")
@click.option("--shots", type=int, default=10000, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Save the (possibly generated) code.")
@seed_option
@format_option
def cmd_fingerprint(code_path: str | None, n_bits: int | None, m_bits: int | None,
                    u: str, v: str, shots: int, out_path: str | None, seed: int, fmt: str) -> None:
    """SWAP-test the fingerprints of two messages under a linear code."""
    rng = qsim.make_rng(seed)
    if code_path is not None:
        code = _load_code(code_path)
    elif n_bits is None or m_bits is None:
        _fail("need --code, or --n and --m for a random code")
        raise AssertionError
    else:
        try:
            code = fp_mod.random_linear_code(n_bits, m_bits, rng)
        except ValueError as exc:
            _fail(str(exc))
            raise AssertionError
    if out_path is not None:
        fp_mod.save_code(code, out_path)
    try:
        psi = fp_mod.fingerprint_state(code, u)
        phi = fp_mod.fingerprint_state(code, v)
        ip = fp_mod.fingerprint_inner_product(code, u, v)
        counts = qsim.swap_test(psi, phi, shots, rng)
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    pairs: list[tuple[str, object]] = [
        ("n", code.n),
        ("m", code.m),
        ("u", u),
        ("v", v),
        ("shots", shots),
        ("seed", seed),
        ("inner_product", ip),
        ("accept_probability", qsim.swap_test_accept_probability(psi, phi)),
        ("accepted", counts.accepted),
        ("rejected", counts.rejected),
        ("accept_rate", counts.accept_rate),
    ]
    if code.n <= fp_mod.MAX_BRUTE_FORCE_BITS:
        pairs.append(("min_distance", code.min_distance()))
        pairs.append(("resistance", fp_mod.fingerprint_resistance(code)))
    if out_path is not None:
        pairs.append(("out", out_path))
    _emit(fmt, pairs)


@main.command("sign")
@keyset_option
@click.option("--security-level", type=int, required=True, help="Private numbers run 1..L.")
@click.option("--bit", type=click.IntRange(0, 1), required=True)
@click.option("--out", "out_prefix", required=True,
              help="Prefix for the public state dumps <prefix>.pub0/.pub1.")
@seed_option
@format_option
def cmd_sign(keyset_path: str, security_level: int, bit: int, out_prefix: str, seed: int, fmt: str) -> None:
    """Generate a keypair, publish its states, reveal the signature for one bit."""
    loaded = _load_keyset(keyset_path)
    try:
        params = sig_mod.ProtocolParams(qhash.HashParams(loaded.keyset), security_level)
        keypair = sig_mod.keygen(params, qsim.make_rng(seed))
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    pub0 = f"{out_prefix}.pub0"
    pub1 = f"{out_prefix}.pub1"
    qsim.dump_state(keypair.public[0], pub0)
    qsim.dump_state(keypair.public[1], pub1)
    _emit(fmt, [
        ("N", loaded.keyset.modulus),
        ("d", loaded.keyset.d),
        ("security_level", security_level),
        ("bit", bit),
        ("seed", seed),
        ("signature", sig_mod.sign(keypair, bit)),
        ("public0", pub0),
        ("public1", pub1),
    ])


@main.command("verify")
@keyset_option
@click.option("--security-level", type=int, required=True)
@click.option("--bit", type=click.IntRange(0, 1), required=True)
@click.option("--signature", type=int, required=True)
@click.option("--public", "public_path", type=click.Path(dir_okay=False), required=True,
              help="State dump of the public key for this bit.")
@seed_option
@format_option
def cmd_verify(keyset_path: str, security_level: int, bit: int, signature: int,
               public_path: str, seed: int, fmt: str) -> None:
    """Check a revealed signature against a held public state."""
    loaded = _load_keyset(keyset_path)
    state = _load_state(public_path)
    try:
        params = sig_mod.ProtocolParams(qhash.HashParams(loaded.keyset), security_level)
        accepted = sig_mod.verify(params, state, bit, signature, qsim.make_rng(seed))
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    _emit(fmt, [
        ("security_level", security_level),
        ("bit", bit),
        ("signature", signature),
        ("public", public_path),
        ("seed", seed),
        ("accepted", accepted),
    ])
    sys.exit(0 if accepted else 1)


@main.command("forge-experiment")
@keyset_option
@click.option("--security-level", type=int, required=True)
@click.option("--trials", type=int, default=10000, show_default=True)
@click.option("--log", "show_log", is_flag=True, help="Print every per-trial record.")
@seed_option
@format_option
def cmd_forge_experiment(keyset_path: str, security_level: int, trials: int,
                         show_log: bool, seed: int, fmt: str) -> None:
    """Uniform-guessing forgery attack; compare against the exact prediction."""
    loaded = _load_keyset(keyset_path)
    try:
        params = sig_mod.ProtocolParams(qhash.HashParams(loaded.keyset), security_level)
        report = sig_mod.forgery_experiment(params, trials, qsim.make_rng(seed))
    except ValueError as exc:
        _fail(str(exc))
        raise AssertionError
    records = {"trials_detail": list(report.lines)} if show_log else None
    _emit(fmt, [
        ("security_level", security_level),
        ("trials", trials),
        ("seed", seed),
        ("successes", report.successes),
        ("rate", report.rate),
        ("predicted", report.predicted),
    ], records)


if __name__ == "__main__":
    main()
