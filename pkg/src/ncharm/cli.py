"""Command-line interface and on-disk formats.

Formats are line-oriented UTF-8 text.  Reals carry 17 significant digits so a
write/read cycle is exact in double precision.

* ``SSIG 1 <B>`` then ``<j> <k> <re> <im>`` for 4B^2 samples, j outer
* ``SSPEC 1 <L>`` then ``<l> <m> <re> <im>`` in ascending (l, m)
* ``SO3SIG 1 <B>`` then ``<j> <k> <l> <re> <im>``
* ``SO3SPEC 1 <L>`` then ``<l> <m> <n> <re> <im>``

Exit codes: 0 success, 2 usage or parse error, 3 bandwidth mismatch,
4 degenerate input, 5 failed verification check.
"""
from __future__ import annotations

import argparse
import inspect
import itertools
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import equivariant_ops as eo
from .errors import BandwidthMismatch, NcharmError
from .rotations import EulerZYZ, make_sphere_grid
from .spectral import (SO3Signal, SO3Spectrum, SphereSignal, SphSpectrum, sht_forward, sht_inverse,
                       so3_ft_forward, so3_ft_inverse)
from .spectral import random_so3_spectrum, random_sph_spectrum, rotate_sph_spectrum
from . import verify

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BANDWIDTH = 3
EXIT_DEGENERATE = 4
EXIT_CHECK = 5

FORMAT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# serialization

def _num(x: float) -> str:
    return f"{x:.17g}"


def _cplx(z: complex) -> str:
    return f"{_num(z.real)} {_num(z.imag)}"


def format_data(obj) -> str:
    if isinstance(obj, SphereSignal):
        B = obj.bandwidth
        lines = [f"SSIG {FORMAT_VERSION} {B}"]
        lines += [f"{j} {k} {_cplx(obj.samples[j, k])}" for j in range(2 * B) for k in range(2 * B)]
    elif isinstance(obj, SphSpectrum):
        lines = [f"SSPEC {FORMAT_VERSION} {obj.lmax}"]
        lines += [f"{l} {m} {_cplx(obj[l, m])}" for l in range(obj.lmax) for m in range(-l, l + 1)]
    elif isinstance(obj, SO3Signal):
        B = obj.bandwidth
        lines = [f"SO3SIG {FORMAT_VERSION} {B}"]
        lines += [f"{j} {k} {l} {_cplx(obj.samples[j, k, l])}"
                  for j, k, l in itertools.product(range(2 * B), repeat=3)]
    elif isinstance(obj, SO3Spectrum):
        lines = [f"SO3SPEC {FORMAT_VERSION} {obj.lmax}"]
        lines += [f"{l} {m} {n} {_cplx(F[m + l, n + l])}" for l, F in enumerate(obj.blocks)
                  for m in range(-l, l + 1) for n in range(-l, l + 1)]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_data(path, obj) -> None:
    atomic_write(path, format_data(obj))


_LAYOUT = {"SSIG": 2, "SSPEC": 2, "SO3SIG": 3, "SO3SPEC": 3}


def parse_data(text: str, path="<input>"):
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError(path, 1, "empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] not in _LAYOUT:
        raise ParseError(path, 1, f"bad header {lines[0]!r}")
    kind = head[0]
    try:
        version, size = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError(path, 1, "header version and size must be integers") from None
    if version != FORMAT_VERSION:
        raise ParseError(path, 1, f"unsupported format version {version}")
    if size < 1:
        raise ParseError(path, 1, f"size must be positive, got {size}")
    nidx = _LAYOUT[kind]
    if kind == "SSIG":
        data = np.zeros((2 * size, 2 * size), complex)
    elif kind == "SO3SIG":
        data = np.zeros((2 * size,) * 3, complex)
    elif kind == "SSPEC":
        data = np.zeros(size * size, complex)
    else:
        data = [np.zeros((2 * l + 1, 2 * l + 1), complex) for l in range(size)]
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != nidx + 2:
            raise ParseError(path, lineno, f"expected {nidx + 2} fields, got {len(parts)}")
        try:
            idx = tuple(int(p) for p in parts[:nidx])
            val = complex(float(parts[nidx]), float(parts[nidx + 1]))
        except ValueError:
            raise ParseError(path, lineno, "malformed number") from None
        if not np.isfinite(val):
            raise ParseError(path, lineno, "non-finite value")
        if idx in seen:
            raise ParseError(path, lineno, f"duplicate entry {idx}")
        seen.add(idx)
        try:
            _store(kind, data, idx, size, val)
        except IndexError as exc:
            raise ParseError(path, lineno, str(exc)) from None
    expected = {"SSIG": 4 * size * size, "SO3SIG": 8 * size ** 3, "SSPEC": size * size,
                "SO3SPEC": sum((2 * l + 1) ** 2 for l in range(size))}[kind]
    if len(seen) != expected:
        raise ParseError(path, len(lines) + 1, f"expected {expected} entries, got {len(seen)}")
    if kind == "SSIG":
        return SphereSignal(size, data)
    if kind == "SO3SIG":
        return SO3Signal(size, data)
    if kind == "SSPEC":
        return SphSpectrum(size, data)
    return SO3Spectrum(size, tuple(data))


def _store(kind, data, idx, size, val):
    if kind in ("SSIG", "SO3SIG"):
        if any(not 0 <= i < 2 * size for i in idx):
            raise IndexError(f"grid index {idx} out of range for bandwidth {size}")
        data[idx] = val
    elif kind == "SSPEC":
        l, m = idx
        if not (0 <= l < size and abs(m) <= l):
            raise IndexError(f"coefficient ({l}, {m}) out of range for L={size}")
        data[l * l + l + m] = val
    else:
        l, m, n = idx
        if not (0 <= l < size and abs(m) <= l and abs(n) <= l):
            raise IndexError(f"coefficient ({l}, {m}, {n}) out of range for L={size}")
        data[l][m + l, n + l] = val


def read_data(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, 0, f"cannot read: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(path, 1, "not UTF-8 text") from None
    return parse_data(text, path)


def _size(obj) -> int:
    return obj.bandwidth if isinstance(obj, (SphereSignal, SO3Signal)) else obj.lmax


# ---------------------------------------------------------------------------
# commands

def _emit(args, text: str) -> None:
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _need_out(args) -> None:
    if not args.out:
        raise ParseError("<args>", 0, "--out is required for this command")


def _check_bandwidth(args, obj) -> None:
    if args.bandwidth is not None and _size(obj) != args.bandwidth:
        raise BandwidthMismatch(f"input has size {_size(obj)} but --bandwidth is {args.bandwidth}")


def cmd_sht(args) -> int:
    _need_out(args)
    obj = read_data(args.input)
    if args.direction == "forward":
        if not isinstance(obj, SphereSignal):
            raise ParseError(args.input, 1, "forward transform needs an SSIG file")
        _check_bandwidth(args, obj)
        result = sht_forward(obj)
    else:
        if not isinstance(obj, SphSpectrum):
            raise ParseError(args.input, 1, "inverse transform needs an SSPEC file")
        B = args.bandwidth if args.bandwidth is not None else obj.lmax
        if obj.lmax != B:
            raise BandwidthMismatch(f"spectrum has L={obj.lmax} but --bandwidth is {B}")
        result = sht_inverse(obj, B)
    write_data(args.out, result)
    return EXIT_OK


def cmd_so3ft(args) -> int:
    _need_out(args)
    obj = read_data(args.input)
    if args.direction == "forward":
        if not isinstance(obj, SO3Signal):
            raise ParseError(args.input, 1, "forward transform needs an SO3SIG file")
        _check_bandwidth(args, obj)
        result = so3_ft_forward(obj)
    else:
        if not isinstance(obj, SO3Spectrum):
            raise ParseError(args.input, 1, "inverse transform needs an SO3SPEC file")
        B = args.bandwidth if args.bandwidth is not None else obj.lmax
        if obj.lmax != B:
            raise BandwidthMismatch(f"spectrum has L={obj.lmax} but --bandwidth is {B}")
        result = so3_ft_inverse(obj, B)
    write_data(args.out, result)
    return EXIT_OK


def _to_spectrum(obj, sphere: bool, path):
    if sphere:
        if isinstance(obj, SphereSignal):
            return sht_forward(obj), True
        if isinstance(obj, SphSpectrum):
            return obj, False
        raise ParseError(path, 1, "expected an SSIG or SSPEC file")
    if isinstance(obj, SO3Signal):
        return so3_ft_forward(obj), True
    if isinstance(obj, SO3Spectrum):
        return obj, False
    raise ParseError(path, 1, "expected an SO3SIG or SO3SPEC file")


def cmd_conv(args) -> int:
    """Convolve (or correlate) two sphere or SO(3) inputs; output matches f's format."""
    _need_out(args)
    sphere = args.domain == "sphere"
    f, f_spatial = _to_spectrum(read_data(args.f), sphere, args.f)
    k, _ = _to_spectrum(read_data(args.k), sphere, args.k)
    if f.lmax != k.lmax:
        raise BandwidthMismatch(f"inputs have L={f.lmax} and L={k.lmax}")
    _check_bandwidth(args, f)
    if sphere:
        out = eo.spherical_convolve(f, k)
        result = sht_inverse(out) if f_spatial else out
    else:
        out = eo.so3_correlate(f, k) if args.correlate else eo.so3_convolve(f, k)
        result = so3_ft_inverse(out) if f_spatial else out
    write_data(args.out, result)
    return EXIT_OK


def cmd_correlate(args) -> int:
    """Estimate the rotation g with ``pattern(x) = signal(g^-1 x)``."""
    signal = read_data(args.signal)
    pattern = read_data(args.pattern)
    k, _ = _to_spectrum(signal, True, args.signal)
    f, _ = _to_spectrum(pattern, True, args.pattern)
    if f.lmax != k.lmax:
        raise BandwidthMismatch(f"signal has L={k.lmax} but pattern has L={f.lmax}")
    _check_bandwidth(args, k)
    if f.energy() == 0.0 or k.energy() == 0.0:
        _emit(args, f"CORR {FORMAT_VERSION} {k.lmax}\nerror degenerate pattern\n")
        return EXIT_DEGENERATE
    peak = eo.correlation_peak(eo.spherical_correlate(f, k), k.lmax)
    g = peak.rotation
    text = (f"CORR {FORMAT_VERSION} {k.lmax}\n"
            f"alpha {_num(g.alpha)}\nbeta {_num(g.beta)}\ngamma {_num(g.gamma)}\n"
            f"index {peak.index[0]} {peak.index[1]} {peak.index[2]}\n"
            f"peak {_num(peak.value)}\n")
    _emit(args, text)
    return EXIT_OK


def parse_correlation_record(text: str) -> dict:
    out = {}
    for line in text.splitlines()[1:]:
        key, *vals = line.split()
        out[key] = " ".join(vals) if key == "error" else [float(v) for v in vals]
    return out


def cmd_cg(args) -> int:
    table = eo.cg_table(args.l1, args.l2)
    lines = [f"CG {FORMAT_VERSION} {args.l1} {args.l2}"]
    for l in table.degrees:
        for m in range(-l, l + 1):
            for m1 in range(-args.l1, args.l1 + 1):
                m2 = m - m1
                if abs(m2) <= args.l2:
                    c = table.coefficient(m1, m2, l, m)
                    if c != 0.0:
                        lines.append(f"{m1} {m2} {l} {m} {_num(c)}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_steerable(args) -> int:
    """Report the angular basis and its constraint residuals; optionally sample it."""
    basis = eo.steerable_basis(args.li, args.lo)
    rng = np.random.default_rng(args.seed)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    rep = verify.VerificationReport("steerable_basis", env={"li": args.li, "lo": args.lo,
                                                            "blocks": len(basis), "seed": args.seed})
    for l, blk in zip(basis.degrees, basis.angular_blocks):
        rep.add(f"block_l{l}", tol, eo.steerable_constraint_residual(blk, args.li, args.lo, args.trials, rng))
    if args.out:
        B = args.bandwidth or 4
        T, P = make_sphere_grid(B).mesh()
        vals = basis.evaluate(T, P)
        lines = [f"STEER {FORMAT_VERSION} {args.li} {args.lo} {B}"]
        for j, k in itertools.product(range(2 * B), repeat=2):
            for b, o, i in itertools.product(range(len(basis)), range(2 * args.lo + 1), range(2 * args.li + 1)):
                lines.append(f"{b} {j} {k} {o} {i} {_cplx(vals[j, k, b, o, i])}")
        atomic_write(args.out, "\n".join(lines) + "\n")
    sys.stdout.write(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_verify(args) -> int:
    kwargs = {}
    if args.suite in ("orthogonality", "equivariance", "oracles", "recovery") and args.bandwidth:
        kwargs["bandwidth"] = args.bandwidth
    if args.suite == "finite" and args.group:
        kwargs["groups"] = tuple(args.group)
        kwargs["configs"] = False
    if args.suite == "orthogonality" and args.lmax is not None:
        kwargs["lmax"] = args.lmax
    if args.tolerance is not None and args.suite != "all":
        params = inspect.signature(verify.SUITES[args.suite]).parameters
        for name in params:
            if name == "tol" or name.startswith("tol_"):
                kwargs[name] = args.tolerance
    rep = verify.run_suite(args.suite, seed=args.seed, **kwargs)
    text = json.dumps(rep.to_dict(), indent=2) + "\n" if args.format == "json" else rep.to_text()
    _emit(args, text)
    if args.out:
        sys.stdout.write(f"{args.suite}: {'PASS' if rep.passed else 'FAIL'}\n")
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_random(args) -> int:
    """Write a random band-limited real test signal (PCG64, explicit seed)."""
    _need_out(args)
    B = args.bandwidth or 8
    rng = np.random.default_rng(args.seed)
    if args.domain == "sphere":
        s = random_sph_spectrum(rng, B, real=True)
        obj = sht_inverse(s, B) if args.spatial else s
    else:
        s = random_so3_spectrum(rng, B, real=True)
        obj = so3_ft_inverse(s, B) if args.spatial else s
    write_data(args.out, obj)
    return EXIT_OK


def cmd_rotate(args) -> int:
    """Write ``x -> f(g^-1 x)`` for a sphere input and Euler angles g."""
    _need_out(args)
    obj = read_data(args.input)
    s, spatial = _to_spectrum(obj, True, args.input)
    out = rotate_sph_spectrum(s, EulerZYZ(*args.euler))
    write_data(args.out, sht_inverse(out) if spatial else out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _global_flags(p, default) -> None:
    p.add_argument("--bandwidth", type=int, default=default, help="bandwidth B (checked against file headers)")
    p.add_argument("--tolerance", type=float, default=default, help="override check tolerances")
    p.add_argument("--out", default=default, help="output path (written atomically)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncharm", description="Harmonic analysis on SO(3), S^2 and finite groups.")
    _global_flags(p, None)
    # global flags are also accepted after the command name
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("sht", help="spherical harmonic transform")
    s.add_argument("input")
    s.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    s.set_defaults(func=cmd_sht)

    s = sub.add_parser("so3ft", help="SO(3) Fourier transform")
    s.add_argument("input")
    s.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    s.set_defaults(func=cmd_so3ft)

    s = sub.add_parser("conv", help="spectral convolution of two inputs")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--sphere", dest="domain", action="store_const", const="sphere")
    g.add_argument("--so3", dest="domain", action="store_const", const="so3")
    s.add_argument("--correlate", action="store_true", help="SO(3) cross-correlation instead of convolution")
    s.add_argument("f")
    s.add_argument("k")
    s.set_defaults(func=cmd_conv)

    s = sub.add_parser("correlate", help="estimate the rotation taking signal to pattern")
    s.add_argument("signal")
    s.add_argument("pattern")
    s.set_defaults(func=cmd_correlate)

    s = sub.add_parser("cg", help="Clebsch-Gordan coefficients")
    s.add_argument("--l1", type=int, required=True)
    s.add_argument("--l2", type=int, required=True)
    s.set_defaults(func=cmd_cg)

    s = sub.add_parser("steerable", help="steerable kernel basis")
    s.add_argument("--li", type=int, required=True)
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_steerable)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("--suite", choices=(*verify.SUITES, "all"), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--group", action="append", help="finite suite: group such as dihedral(4); repeatable")
    s.add_argument("--lmax", type=int, default=None)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("random", help="write a random real band-limited test input")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--sphere", dest="domain", action="store_const", const="sphere")
    g.add_argument("--so3", dest="domain", action="store_const", const="so3")
    s.add_argument("--spatial", action="store_true", help="write samples instead of a spectrum")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("rotate", help="rotate a sphere input by ZYZ Euler angles")
    s.add_argument("input")
    s.add_argument("--euler", type=float, nargs=3, required=True, metavar=("ALPHA", "BETA", "GAMMA"))
    s.set_defaults(func=cmd_rotate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.bandwidth is not None and args.bandwidth < 1:
        parser.error("--bandwidth must be positive")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BandwidthMismatch as exc:
        print(f"error: bandwidth mismatch: {exc}", file=sys.stderr)
        return EXIT_BANDWIDTH
    except NcharmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
