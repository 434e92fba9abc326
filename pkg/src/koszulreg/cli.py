"""Line-oriented session language and command dispatch.

A session declares rings, fans, ideals and modules, then runs commands::

    ring R weights 2 3 5 field QQ
    ideal m = x0, x1, x2
    module M = ideal m
    resolve M
    regularity M --both

Exit codes: 0 success, 1 zero module, 2 violation, 3 resource ceiling,
4 parse or homogeneity error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import shlex
import sys
from collections import Counter

from . import bgg, regularity as reg, resolution as res, toric
from .core import FreeModule, GF, GradingError, HomogeneityError, QQ, Ring, ZeroModuleError
from .groebner import ResourceError

EXIT_OK, EXIT_ZERO, EXIT_VIOLATION, EXIT_RESOURCE, EXIT_PARSE = 0, 1, 2, 3, 4


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


# -- polynomial parsing -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(text, line=None, offset=0):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kinds = ["num", "name", "^", "*", "+", "-", "(", ")"]
        for k, g in zip(kinds, m.groups()):
            if g is not None:
                out.append((k, g, offset + m.start(m.lastindex) + 1))
                break
        pos = m.end()
    return out


def parse_polynomial(ring, text, line=None, offset=0):
    """Parse a sum of terms c*x^a*y^b (rational c) into a raw polynomial dict."""
    toks = _tokenize(text, line, offset)
    if not toks:
        raise ParseError("empty polynomial", line, offset + 1)
    field = ring.field
    n = ring.nvars
    names = {name: ring.slot[i] for i, name in enumerate(ring.names)}
    terms = {}
    i = 0

    def add(e, c):
        e = tuple(e)
        x = field.red(terms.get(e, 0) + c)
        if x:
            terms[e] = x
        else:
            terms.pop(e, None)

    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val, col = toks[i]
        if kind in "+-" and expect_term:
            sign = sign * (-1 if kind == "-" else 1)
            i += 1
            continue
        if not expect_term:
            if kind in "+-":
                sign = -1 if kind == "-" else 1
                expect_term = True
                i += 1
                continue
            raise ParseError(f"expected + or - before {val!r}", line, col)
        coeff = field(1)
        e = [0] * n
        while True:
            if i >= len(toks):
                raise ParseError("polynomial ends in the middle of a term", line, offset + len(text))
            kind, val, col = toks[i]
            if kind == "num":
                coeff = coeff * field(val)
                i += 1
            elif kind == "name":
                if val not in names:
                    raise ParseError(f"unknown variable {val!r}", line, col)
                k = names[val]
                i += 1
                power = 1
                if i < len(toks) and toks[i][0] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ParseError("exponent must be a nonnegative integer", line, toks[i][2])
                    power = int(toks[i + 1][1])
                    i += 2
                e[k] += power
            else:
                raise ParseError(f"unexpected {val!r}", line, col)
            if i < len(toks) and toks[i][0] == "*":
                i += 1
                continue
            break
        add(e, field.red(sign * coeff))
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("polynomial ends with an operator", line, offset + len(text))
    return terms


def _split_top(text, sep=","):
    """Split on ``sep`` outside brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_int_matrix(text, line):
    try:
        val = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad integer list: {exc.msg}", line, exc.pos + 1) from None
    if not isinstance(val, list) or not all(isinstance(r, list) for r in val):
        raise ParseError("expected a list of lists", line)
    return val


def _parse_field(text, line):
    text = text.strip()
    if text == "QQ":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", text)
    if m:
        try:
            return GF(int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
    raise ParseError(f"unknown field {text!r} (use QQ or GF(p))", line)


# -- session state -----------------------------------------------------------------

class Session:
    def __init__(self, out=None, json_output=False, seed=0):
        self.rings = {}
        self.fans = {}
        self.cox = {}
        self.ideals = {}
        self.modules = {}
        self.current_ring = None
        self.out = out or sys.stdout
        self.json = json_output
        self.seed = seed
        self.status = EXIT_OK

    def emit(self, obj):
        if self.json:
            print(json.dumps(obj, sort_keys=True), file=self.out)
        elif isinstance(obj, str):
            print(obj, file=self.out)
        else:
            print(json.dumps(obj, sort_keys=True), file=self.out)

    def flag(self, code):
        self.status = max(self.status, code)

    # declarations
    def declare_ring(self, name, args, line):
        names = None
        field = QQ
        if "field" in args:
            k = args.index("field")
            field = _parse_field(args[k + 1] if k + 1 < len(args) else "", line)
            args = args[:k] + args[k + 2:]
        if "vars" in args:
            k = args.index("vars")
            rest = args[k + 1:]
            stop = next((j for j, a in enumerate(rest) if a in ("weights", "degrees", "fan")), len(rest))
            names = rest[:stop]
            args = args[:k] + rest[stop:]
        if not args:
            raise ParseError("ring needs weights, degrees or fan", line)
        kind = args[0]
        cox = None
        if kind == "weights":
            try:
                degs = [int(a) for a in args[1:]]
            except ValueError:
                raise ParseError("weights must be integers", line) from None
        elif kind == "degrees":
            degs = [tuple(r) for r in _parse_int_matrix(" ".join(args[1:]), line)]
        elif kind == "fan":
            if len(args) < 2 or args[1] not in self.fans:
                raise ParseError(f"unknown fan {args[1] if len(args) > 1 else ''!r}", line)
            cox = toric.CoxData(self.fans[args[1]], field)
            degs = cox.degrees
        else:
            raise ParseError(f"unknown ring kind {kind!r}", line)
        ring = Ring(degs, field, names)
        if cox is not None:
            cox.ring = ring
            self.cox[name] = cox
        self.rings[name] = ring
        self.current_ring = name

    def ring_for(self, line):
        if self.current_ring is None:
            raise ParseError("declare a ring first", line)
        return self.rings[self.current_ring]

    def declare_ideal(self, name, text, line, offset):
        ring = self.ring_for(line)
        polys = []
        pos = offset
        for part in _split_top(text):
            if part.strip():
                f = parse_polynomial(ring, part, line, pos)
                if f and len({ring.grading.degree(e) for e in f}) > 1:
                    raise HomogeneityError(f"line {line}: {part.strip()} is not homogeneous")
                polys.append(f)
            pos += len(part) + 1
        self.ideals[name] = (self.current_ring, polys)

    def declare_module(self, name, text, line, offset):
        words = text.split()
        if not words:
            raise ParseError("empty module declaration", line, offset + 1)
        kind = words[0]
        ring = self.ring_for(line)
        if kind in ("quotient", "ideal"):
            if len(words) < 2 or words[1] not in self.ideals:
                raise ParseError(f"unknown ideal {words[1] if len(words) > 1 else ''!r}", line)
            _, polys = self.ideals[words[1]]
            M = (res.PresentedModule.quotient(ring, polys) if kind == "quotient"
                 else res.PresentedModule.ideal(ring, polys))
        elif kind == "free":
            degs = [ring.grading.as_degree(json.loads(w)) for w in words[1:]] or [ring.grading.zero]
            M = res.PresentedModule.free_module(ring, degs)
        elif kind == "residue":
            M = res.PresentedModule.residue_field(ring)
        elif kind == "coker":
            M = self._coker(ring, text[len("coker"):], line, offset + len("coker"))
        elif kind == "twist":
            M = self._module(words[1], line).twist(ring.grading.as_degree(json.loads(" ".join(words[2:]))))
        elif kind == "truncate":
            base = self._module(words[1], line)
            at = ring.grading.as_degree(json.loads(" ".join(words[2:])))
            M = (toric.multigraded_truncate(base, at) if ring.grading.rho > 1
                 else reg.truncate(base, at).twist(at))
        elif kind == "sum":
            M = self._module(words[1], line)
            for w in words[2:]:
                M = M.direct_sum(self._module(w, line))
        else:
            raise ParseError(f"unknown module constructor {kind!r}", line, offset + 1)
        self.modules[name] = M

    def _coker(self, ring, text, line, offset):
        text = text.strip()
        degrees = None
        m = re.search(r"\bdegrees\b", text)
        if m:
            degrees = text[m.end():].strip()
            text = text[:m.start()].strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ParseError("coker expects a matrix [[...], ...]", line, offset + 1)
        inner = text[1:-1].strip()
        rows = []
        if inner:
            for part in _split_top(inner):
                part = part.strip()
                if not (part.startswith("[") and part.endswith("]")):
                    raise ParseError("each matrix row must be [...]", line, offset + 1)
                rows.append([parse_polynomial(ring, p, line, offset) for p in _split_top(part[1:-1])])
        g = ring.grading
        nrows = len(rows)
        if degrees is None:
            tdeg = [g.zero] * nrows
        else:
            vals = json.loads("[" + ",".join(degrees.split()) + "]") if degrees else []
            tdeg = [g.as_degree(v) for v in vals]
            if len(tdeg) != nrows:
                raise ParseError(f"{len(tdeg)} degrees for {nrows} rows", line)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ParseError("matrix rows have different lengths", line)
        F = FreeModule(ring, tdeg)
        rels = []
        for c in range(ncols):
            v = {}
            for r in range(nrows):
                for e, x in rows[r][c].items():
                    v[(r, e)] = x
            if v and not F.is_homogeneous(v):
                raise HomogeneityError(f"line {line}: column {c} of the matrix is not homogeneous")
            rels.append(v)
        return res.PresentedModule(F, rels)

    def _module(self, name, line):
        if name not in self.modules and name in self.ideals:
            ring_name, polys = self.ideals[name]
            self.modules[name] = res.PresentedModule.ideal(self.rings[ring_name], polys)
        if name not in self.modules:
            raise ParseError(f"unknown module {name!r}", line)
        return self.modules[name]

    # commands
    def run_command(self, words, line):
        cmd = words[0]
        if cmd == "betti":
            M = self._module(words[1], line)
            B = res.betti_table(M)
            if self.json or "--json" in words:
                print(json.dumps(B.to_json(M.field.name), sort_keys=True), file=self.out)
            else:
                self.emit(B.format())
        elif cmd == "resolve":
            M = self._module(words[1], line)
            L = int(words[words.index("--length") + 1]) if "--length" in words else None
            C = M.resolution(L)
            if self.json:
                self.emit({"field": M.field.name, "twists": [[_deg_json(a) for a in F.degrees] for F in C.modules]})
            else:
                for i, F in enumerate(C.modules):
                    self.emit(f"F{i}: " + _format_twists(F.degrees))
        elif cmd == "regularity":
            M = self._module(words[1], line)
            rep = reg.regularity_report(M)
            d = rep.as_dict()
            if "--koszul" in words:
                d.pop("weighted")
                d.pop("weighted_witness")
            elif "--weighted" in words:
                d.pop("koszul")
                d.pop("koszul_witness")
            if self.json:
                self.emit(d)
            else:
                if "koszul" in d:
                    self.emit(f"koszul regularity: {d['koszul']} (witness i={d['koszul_witness']['i']}, "
                              f"degree {d['koszul_witness']['degree']})")
                if "weighted" in d:
                    self.emit(f"weighted regularity: {d['weighted']} (witness i={d['weighted_witness']['i']}, "
                              f"degree {d['weighted_witness']['degree']})")
        elif cmd == "truncate":
            M = self._module(words[1], line)
            if "--at" not in words:
                raise ParseError("truncate needs --at r", line)
            r = json.loads(words[words.index("--at") + 1])
            g = M.grading
            T = toric.multigraded_truncate(M, r) if g.rho > 1 else reg.truncate(M, r).twist(r)
            if self.json:
                self.emit({"generators": [_deg_json(a) for a in T.free.degrees]})
            else:
                self.emit("generators: " + _format_twists(T.free.degrees))
        elif cmd == "verify":
            M = self._module(words[1], line)
            which = words[words.index("--theorem") + 1] if "--theorem" in words else "a"
            fn = {"a": reg.verify_theorem_a, "b": reg.verify_theorem_b,
                  "symonds": reg.verify_symonds, "cor16": reg.verify_cor16,
                  "cor17": reg.verify_cor17}.get(which)
            if fn is None:
                raise ParseError(f"unknown theorem {which!r}", line)
            rep = fn(M)
            self.emit(_jsonable(rep.as_dict()) if self.json else
                      f"{rep.name}: {'ok' if rep.ok else 'VIOLATION'} {json.dumps(_jsonable(rep.details), sort_keys=True)}")
            if not rep.ok:
                self.emit(json.dumps(_jsonable(rep.violations)))
                self.flag(EXIT_VIOLATION)
        elif cmd == "toric":
            self._toric(words, line)
        elif cmd == "bgg":
            M = self._module(words[2], line)
            lo, hi = (int(x) for x in words[words.index("--window") + 1:words.index("--window") + 3])
            D = bgg.bgg_R(M, (lo, hi))
            B = res.betti_table(M)
            n1 = M.grading.nvars
            bad, checked = [], 0
            for c in range(lo + D.margin, hi - D.margin + 1):
                for j in range(n1 + 1):
                    h = D.homology(c, j)
                    checked += 1
                    if h != B[(j, c)]:
                        bad.append({"degree": c, "j": j, "homology": h, "betti": B[(j, c)]})
            self.emit({"checked": checked, "mismatches": bad} if self.json else
                      f"bgg: {checked} bidegrees checked, {len(bad)} mismatches")
            if bad:
                self.flag(EXIT_VIOLATION)
        elif cmd == "dump":
            M = self._module(words[1], line)
            self.emit(dump_module(M, words[1]))
        elif cmd == "fuzz":
            self._fuzz(words, line)
        else:
            raise ParseError(f"unknown command {cmd!r}", line, 1)

    def _toric(self, words, line):
        sub = words[1]
        if sub == "polytope":
            fan = words[2]
            cox = self._cox_for_fan(fan, line)
            i = int(words[words.index("--i") + 1]) if "--i" in words else 0
            P = toric.betti_polytope(cox, i)
            if self.json:
                self.emit(P.as_dict())
            else:
                for nv, b in P.upper:
                    self.emit(f"normal {list(nv)}: a < {b + 1}")
        elif sub == "check":
            cox = self._cox_for_fan(words[2], line)
            M = self._module(words[3], line)
            rep = toric.check_containment(M, cox)
            lemma = [toric.lemma_technical_check(M, I) for I in cox.collections]
            ok = rep.ok and all(x["ok"] for x in lemma)
            d = rep.as_dict()
            d["lemma"] = [{"collection": list(I), "ok": x["ok"], "checked": x["checked"]}
                          for I, x in zip(cox.collections, lemma)]
            if self.json:
                self.emit(d)
            else:
                self.emit(f"containment: {'ok' if rep.ok else 'VIOLATION'}; H0_B zero: {rep.torsion_free}; "
                          f"{rep.hypothesis}")
                for item in d["lemma"]:
                    self.emit(f"lemma {item['collection']}: {'ok' if item['ok'] else 'VIOLATION'}")
            if not ok:
                self.flag(EXIT_VIOLATION)
        else:
            raise ParseError(f"unknown toric subcommand {sub!r}", line)

    def _cox_for_fan(self, fan, line):
        for name, cox in self.cox.items():
            if cox.fan is self.fans.get(fan):
                return cox
        if fan not in self.fans:
            raise ParseError(f"unknown fan {fan!r}", line)
        return toric.CoxData(self.fans[fan])

    def _fuzz(self, words, line):
        count = int(words[words.index("--count") + 1]) if "--count" in words else 20
        seed = int(words[words.index("--seed") + 1]) if "--seed" in words else self.seed
        results = run_fuzz(count, seed)
        bad = [r for r in results if not r["ok"]]
        self.emit({"count": count, "seed": seed, "violations": bad} if self.json else
                  f"fuzz: {count} modules, seed {seed}, {len(bad)} violations")
        if bad:
            self.flag(EXIT_VIOLATION)


def _fuzz_one(args):
    seed, k = args
    rng = random.Random(seed * 100003 + k)
    M, exps = reg.random_monomial_quotient(rng)
    checks = [reg.verify_theorem_a(M), reg.verify_theorem_b(M), reg.verify_symonds(M)]
    return {"index": k, "ok": all(c.ok for c in checks),
            "failed": [c.name for c in checks if not c.ok], "ideal": [list(e) for e in exps],
            "weights": list(M.grading.degrees)}


def run_fuzz(count, seed):
    threads = int(os.environ.get("GSW_THREADS", "1") or 1)
    jobs = [(seed, k) for k in range(count)]
    if threads > 1:
        from multiprocessing import Pool
        with Pool(threads) as pool:
            return pool.map(_fuzz_one, jobs)
    return [_fuzz_one(j) for j in jobs]


def _deg_json(a):
    return list(a) if isinstance(a, tuple) else [a]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and x == float("-inf"):
        return None
    return x


def _format_twists(degrees):
    if not degrees:
        return "0"
    if isinstance(degrees[0], tuple):
        counts = Counter(degrees)
        return " + ".join(f"{tuple(a)}^{m}" if m > 1 else f"{tuple(a)}" for a, m in counts.items())
    return " ".join(str(a) for a in degrees)


def dump_module(M, name="M"):
    """Session text declaring the ring and ``M`` as a cokernel; parse() reads it back."""
    ring = M.ring
    g = ring.grading
    orig = [None] * ring.nvars
    for k in range(ring.nvars):
        orig[g.perm[k]] = g.degrees[k]
    vars_part = "vars " + " ".join(ring.names)
    if g.rho == 1:
        head = f"ring R_{name} {vars_part} weights {' '.join(str(d) for d in orig)} field {ring.field.name}"
    else:
        head = f"ring R_{name} {vars_part} degrees {json.dumps([list(d) for d in orig])} field {ring.field.name}"
    rows = []
    for p in range(M.free.rank):
        row = []
        for v in M.relations:
            row.append(ring.format_poly({e: c for (q, e), c in v.items() if q == p}))
        rows.append("[" + ", ".join(row) + "]")
    degs = " ".join(json.dumps(list(a)) if isinstance(a, tuple) else str(a) for a in M.free.degrees)
    body = f"module {name} = coker [{', '.join(rows)}]"
    if degs:
        body += f" degrees {degs}"
    return head + "\n" + body


# -- driver ---------------------------------------------------------------------------

def parse_and_run(text, session):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"(ring|fan|ideal|module)\s+([A-Za-z_][A-Za-z_0-9]*)\s*(.*)$", line)
        if m:
            kind, name, rest = m.groups()
            if kind == "ring":
                session.declare_ring(name, shlex.split(rest), lineno)
            elif kind == "fan":
                mm = re.match(r"rays\s+(\[.*\])\s+cones\s+(\[.*\])$", rest)
                if not mm:
                    raise ParseError("fan syntax: fan F rays [[..]] cones [[..]]", lineno)
                session.fans[name] = toric.FanData(_parse_int_matrix(mm.group(1), lineno),
                                                   _parse_int_matrix(mm.group(2), lineno))
            else:
                if not rest.startswith("="):
                    raise ParseError(f"expected '=' after {kind} {name}", lineno, line.find(rest) + 1)
                body = rest[1:]
                offset = len(line) - len(body)
                if kind == "ideal":
                    session.declare_ideal(name, body, lineno, offset)
                else:
                    session.declare_module(name, body.strip(), lineno, offset)
            continue
        words = shlex.split(line)
        try:
            session.run_command(words, lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, (ParseError, HomogeneityError, GradingError, ZeroModuleError)):
                raise
            raise ParseError(f"malformed command {words[0]!r}: {exc}", lineno) from None
    return session


def parse(text):
    """Parse declarations (commands are executed) and return the session."""
    import io
    return parse_and_run(text, Session(out=io.StringIO()))


def main(argv=None):
    ap = argparse.ArgumentParser(prog="koszulreg", description="Betti tables and regularity over weighted and toric polynomial rings")
    ap.add_argument("input", nargs="?", default="-", help="session file ('-' for stdin)")
    ap.add_argument("-e", "--execute", action="append", default=[], help="session line to run (repeatable)")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--seed", type=int, default=0, help="seed for fuzz runs")
    args = ap.parse_args(argv)
    if args.execute:
        text = "\n".join(args.execute)
    elif args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    session = Session(json_output=args.json, seed=args.seed)
    try:
        parse_and_run(text, session)
    except (ParseError, HomogeneityError, GradingError, toric.FanError,
            json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroModuleError as exc:
        print(f"zero module: {exc}", file=sys.stderr)
        return EXIT_ZERO
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return session.status


if __name__ == "__main__":
    sys.exit(main())
