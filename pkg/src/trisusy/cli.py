"""Command-line front end.

Every operation of the library is exposed as a reproducible subcommand with
JSON/CSV/table output; ``verify`` runs the whole identity battery and exits
nonzero on any failure.  Exit codes: 0 success, 2 configuration error,
3 numeric-domain error, 4 verification failure.
"""

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import models, states
from .errors import NumericDomainError
from .invariance import (SpectrumFunction, commutator_diagonal, epsilon1,
                         epsilon1_n_independence, hierarchy, inverse_construct,
                         model_spectrum, partner_spectrum, shape_invariance_residual,
                         spectrum, telescoping_check)
from .operators import (ExpansionVector, LadderCoefficients, TridiagonalOperator,
                        apply_A, apply_Adagger, compose, factorize, partner)

_MODEL_CHOICES = ("kinetic", "oscillator", "morse")

# Per-identity verification thresholds (the report's defaults table).
VERIFY_THRESHOLDS = {
    "factorize-roundtrip": 1e-9,
    "ladder-AdagA": 1e-10,
    "partner-AAdag": 1e-10,
    "shape-invariance": 1e-9,
    "eps1-value": 1e-12,
    "eps1-n-independence": 1e-10,
    "commutator": 1e-10,
    "telescoping": 1e-10,
    "partner-spectrum": 1e-10,
    "partner-potential": 1e-10,
    "hierarchy": 1e-9,
    "inverse-roundtrip": 1e-10,
    "annihilation": 1e-8,
    "groundstate-closed-form-oscillator": 1e-7,
    "groundstate-closed-form-morse": 1e-6,
    "scale-invariance": 1e-6,
    "coherent-ground": 0.0,
    "coherent-normalization": 1e-8,
    "moment": 1e-8,
    "lowering": 1e-7,
    "lowering-annihilation": 1e-8,
    "product-term": 1e-9,
    "superpotential": 1e-5,
}


def _fmt(x):
    return repr(float(x))


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_model_args(sp):
    sp.add_argument("--model", choices=_MODEL_CHOICES, help="catalogue model")
    sp.add_argument("--l", type=int, default=None, help="angular momentum (radial models)")
    sp.add_argument("--omega", type=float, default=None, help="oscillator frequency")
    sp.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="free basis scale (radial models)")
    sp.add_argument("--alpha", type=float, default=None, help="Morse range parameter")
    sp.add_argument("--D", type=float, default=None, help="Morse depth parameter")
    sp.add_argument("--V0", type=float, default=None,
                    help="Morse well depth (alternative to --D)")
    sp.add_argument("--gamma", type=float, default=None,
                    help="free Laguerre order (Morse)")
    sp.add_argument("--config", default=None, help="JSON config file; flags override it")


def _add_output_args(sp, formats=("json", "csv", "table")):
    sp.add_argument("--out", default=None, help="output path (default: stdout)")
    sp.add_argument("--format", choices=formats, default=formats[0])


class ConfigError(Exception):
    pass


def _build_params(args):
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    variant = args.model or cfg.get("model")
    if variant is None:
        raise ConfigError("no model selected: pass --model or a config file")
    if variant not in _MODEL_CHOICES:
        raise ConfigError(f"unknown model {variant!r}")

    def pick(flag, key, default):
        val = getattr(args, flag, None)
        if val is not None:
            return val
        return cfg.get(key, default)

    try:
        if variant == "kinetic":
            return models.kinetic(l=pick("l", "l", 0), lam=pick("lam", "lambda", 1.0))
        if variant == "oscillator":
            return models.oscillator(l=pick("l", "l", 0), omega=pick("omega", "omega", 1.0),
                                     lam=pick("lam", "lambda", 2.0))
        alpha = pick("alpha", "alpha", 1.0)
        d_par = pick("D", "D", None)
        v0 = pick("V0", "V0", None)
        if d_par is None and v0 is not None:
            d_par = math.sqrt(2.0 * v0) / alpha - 0.5
        if d_par is None:
            d_par = 2.0
        return models.morse(alpha=alpha, D=d_par, gamma=pick("gamma", "gamma", 2.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_grid(spec_text, default):
    text = spec_text or default
    try:
        start, stop, num = text.split(":")
        grid = np.linspace(float(start), float(stop), int(num))
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}; expected start:stop:num") from exc
    if len(grid) < 2:
        raise ConfigError("grid needs at least two points")
    return grid


def _default_grid(params):
    return "-1:3:121" if params.variant == "morse" else "0.05:6:120"


def _check_run_config(n_terms, tolerance=1e-8):
    if n_terms < 4:
        raise ConfigError(f"truncation N must be >= 4, got {n_terms}")
    if tolerance <= 0:
        raise ConfigError(f"tolerance must be positive, got {tolerance}")


# ---------------------------------------------------------------- spectrum

def cmd_spectrum(args):
    params = _build_params(args)
    model = models.make_model(params)
    notes = []
    m_top = args.m_max
    if model.m_max is not None and m_top > model.m_max:
        notes.append(f"note: spectrum clipped to the bound-state window m <= {model.m_max}")
        m_top = model.m_max
    if params.variant == "kinetic":
        notes.append("note: degenerate eps_1 = 0 case (continuous spectrum); "
                     "all levels coincide at 0")
    rows = []
    for m in range(m_top + 1):
        eps = spectrum(model, m)
        has_plus = model.m_max is None or m + 1 <= model.m_max
        eps_plus = partner_spectrum(model, m) if has_plus else None
        rows.append((m, eps, eps_plus))
    if args.format == "json":
        payload = {"model": params.variant,
                   "rows": [{"m": m, "eps": e, "eps_plus": ep} for m, e, ep in rows],
                   "notes": notes}
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        lines = [f"# {n}" for n in notes] + ["m,eps_m,eps_plus_m"]
        lines += [f"{m},{_fmt(e)},{'' if ep is None else _fmt(ep)}" for m, e, ep in rows]
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"{'m':>3}  {'eps_m':>22}  {'eps_plus_m':>22}"]
        lines += [f"{m:>3}  {_fmt(e):>22}  {'' if ep is None else _fmt(ep):>22}"
                  for m, e, ep in rows]
        lines += notes
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- factorize

def _load_operator(path):
    try:
        with open(path) as fh:
            payload = json.load(fh)
        return TridiagonalOperator.from_json_dict(payload)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot load operator from {path}: {exc}") from exc


def cmd_factorize(args):
    if args.input:
        op = _load_operator(args.input)
        n_terms = args.N if args.N is not None else op.n_max - 1
    else:
        params = _build_params(args)
        model = models.make_model(params)
        n_terms = args.N if args.N is not None else 60
        op = model.operator(n_terms + 20)
    _check_run_config(n_terms)
    lad = factorize(op, args.eps0, n_terms)
    payload = lad.to_json_dict()
    payload["c_sq"] = (lad.c ** 2).tolist()
    payload["d_sq"] = (lad.d ** 2).tolist()
    lines = [json.dumps(payload, indent=2)]
    if args.roundtrip:
        re_op = compose(lad)
        k = min(len(re_op.a), len(op.a))
        dev_a = float(np.max(np.abs(re_op.a[:k] - op.a[:k])))
        dev_b = float(np.max(np.abs(re_op.b[: k - 1] - op.b[: k - 1])))
        scale = float(np.max(np.abs(op.a[:k])))
        lines.append(f"roundtrip max residual: {_fmt(max(dev_a, dev_b) / scale)} (relative)")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_partner(args):
    if args.input:
        try:
            with open(args.input) as fh:
                lad = LadderCoefficients.from_json_dict(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot load ladder coefficients from {args.input}: {exc}")
    else:
        params = _build_params(args)
        n_terms = args.N if args.N is not None else 60
        _check_run_config(n_terms)
        lad = models.make_model(params).ladder(n_terms)
    h_plus = partner(lad)
    _emit(json.dumps(h_plus.to_json_dict(), indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- hierarchy

_C_RULES = ("c_{n+%d}", "d_{n+1}")


def cmd_hierarchy(args):
    params = _build_params(args)
    model = models.make_model(params)
    _check_run_config(max(args.N, 4))
    rows = []
    for k in range(args.k_max + 1):
        zeroed, shifted_lvl = hierarchy(model, k)
        for lvl, c_rule, d_rule in ((zeroed, f"c_(n+{k})", "d_n"),
                                    (shifted_lvl, "d_(n+1)", f"c_(n+{k})")):
            rows.append({
                "level": k,
                "kind": lvl.kind,
                "ground_energy": lvl.ground_energy,
                "c_rule": c_rule,
                "d_rule": d_rule,
                "a_samples": [lvl.a_at(n) for n in range(3)],
                "b_samples": [lvl.b_at(n) for n in range(3)],
            })
    if args.format == "json":
        text = json.dumps({"model": params.variant, "rows": rows}, indent=2) + "\n"
    elif args.format == "csv":
        lines = ["level,kind,ground_energy,c_rule,d_rule,a_0,a_1,a_2,b_0,b_1,b_2"]
        for r in rows:
            samples = ",".join(_fmt(v) for v in r["a_samples"] + r["b_samples"])
            lines.append(f"{r['level']},{r['kind']},{_fmt(r['ground_energy'])},"
                         f"{r['c_rule']},{r['d_rule']},{samples}")
        text = "\n".join(lines) + "\n"
    else:
        header = (f"| {'k':>2} | {'kind':<15} | {'ground':>12} | {'c rule':<8} | "
                  f"{'d rule':<8} | {'a_0':>12} | {'b_0':>12} |")
        sep = "|" + "-" * (len(header) - 2) + "|"
        lines = [header, sep]
        for r in rows:
            lines.append(f"| {r['level']:>2} | {r['kind']:<15} | "
                         f"{r['ground_energy']:>12.6g} | {r['c_rule']:<8} | "
                         f"{r['d_rule']:<8} | {r['a_samples'][0]:>12.6g} | "
                         f"{r['b_samples'][0]:>12.6g} |")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- inverse

def cmd_inverse(args):
    if args.spectrum_file:
        try:
            with open(args.spectrum_file) as fh:
                eps_list = [float(v) for v in json.load(fh)]
        except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
            raise ConfigError(f"cannot load spectrum from {args.spectrum_file}: {exc}")
        if args.c0_sq is None or args.d1_sq is None:
            raise ConfigError("--c0-sq and --d1-sq are required with --spectrum-file")
        m_top = args.M if args.M is not None else len(eps_list) - 1
        if m_top > len(eps_list) - 1:
            raise ConfigError(f"--M {m_top} exceeds supplied spectrum length")
        spec_fn = SpectrumFunction(eval=lambda m: eps_list[m], m_max=len(eps_list) - 1)
        c0_sq, d1_sq = args.c0_sq, args.d1_sq
    else:
        params = _build_params(args)
        model = models.make_model(params)
        spec_fn = model_spectrum(model)
        c0_sq = args.c0_sq if args.c0_sq is not None else model.c_sq(0)
        d1_sq = args.d1_sq if args.d1_sq is not None else model.d_sq(1)
        m_top = args.M if args.M is not None else 20
        if model.m_max is not None:
            m_top = min(m_top, model.m_max)
    lad = inverse_construct(spec_fn, c0_sq, d1_sq, m_top)
    payload = lad.to_json_dict()
    payload["c_sq"] = (lad.c ** 2).tolist()
    payload["d_sq"] = (lad.d ** 2).tolist()
    lines = [json.dumps(payload, indent=2)]
    if args.validate:
        dev = 0.0
        for m in range(1, m_top + 1):
            rebuilt = (lad.c[0] ** 2 - lad.c[m] ** 2) + m * lad.d[1] ** 2
            dev = max(dev, abs(rebuilt - spec_fn(m)))
        lines.append(f"spectrum validation max deviation: {_fmt(dev)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- grids

def _grid_csv(grid_obj, oracle=None, oracle_name="closed_form"):
    if oracle is None:
        return grid_obj.to_csv_text()
    lines = [f"x,value,{oracle_name}"]
    lines += [f"{float(x)!r},{float(v)!r},{float(o)!r}"
              for x, v, o in zip(grid_obj.x, grid_obj.values, oracle)]
    return "\n".join(lines) + "\n"


def cmd_groundstate(args):
    params = _build_params(args)
    n_terms = args.N if args.N is not None else 60
    _check_run_config(n_terms)
    grid = _parse_grid(args.grid, _default_grid(params))
    wf = states.ground_wavefunction(params, grid, n_terms)
    oracle = None
    lines = []
    if args.compare_closed_form:
        oracle = states.ground_state_closed_form(params, grid)
        lines.append(f"max deviation from closed form: "
                     f"{_fmt(np.max(np.abs(wf.values - oracle)))}")
    text = _grid_csv(wf, oracle)
    if lines:
        text += "".join(line + "\n" for line in lines)
    _emit(text, args.out)
    return 0


def cmd_coherent(args):
    params = _build_params(args)
    model = models.make_model(params)
    n_terms = args.N if args.N is not None else 60
    if model.m_max is not None:
        n_terms = min(n_terms, model.m_max)
    _check_run_config(max(n_terms, 4))
    state = states.coherent_coefficients(model, complex(args.z_re, args.z_im), n_terms)
    payload = state.to_json_dict()
    payload["norm_sq"] = state.norm_sq()
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_superpotential(args):
    params = _build_params(args)
    n_terms = args.N if args.N is not None else 60
    _check_run_config(n_terms)
    grid = _parse_grid(args.grid, _default_grid(params))
    wf = states.superpotential_eval(params, grid, n_terms, channel=args.channel)
    oracle = None
    lines = []
    if args.compare_closed_form:
        oracle = states.morse_superpotential_closed_form(params, grid)
        lines.append(f"max deviation from closed form: "
                     f"{_fmt(np.max(np.abs(wf.values - oracle)))}")
    text = _grid_csv(wf, oracle)
    if lines:
        text += "".join(line + "\n" for line in lines)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- verify

def _perturbed(model, index):
    """Model with c_n^2 bumped by +0.1 at one (n, eta) cell.

    The bump is tied to the model's own eta so it genuinely breaks the
    translation property rather than shifting every slice consistently.
    """
    base = model.c_sq_fn
    eta0 = model.eta

    def c_sq_fn(n, eta, _b=base, _i=index):
        return _b(n, eta) + (0.1 if n == _i and eta == eta0 else 0.0)

    return replace(model, c_sq_fn=c_sq_fn)


def _verify_model(params, results, n_alg=40):
    """Append (identity, model, deviation) rows for one catalogue model."""
    label = params.variant
    model = models.make_model(params)
    add = lambda ident, dev: results.append((ident, label, float(dev)))

    op = model.operator(n_alg + 20)
    lad = factorize(op, 0.0, n_alg + 1)
    re_op = compose(lad)
    scale = float(np.max(np.abs(op.a[: n_alg + 1])))
    add("factorize-roundtrip",
        max(float(np.max(np.abs(re_op.a[: n_alg + 1] - op.a[: n_alg + 1]))),
            float(np.max(np.abs(re_op.b[: n_alg] - op.b[: n_alg])))) / scale)

    chain = model.ladder(n_alg + 2)
    dev_h = 0.0
    dev_p = 0.0
    h_plus = partner(chain)
    for m in range(n_alg):
        e_m = ExpansionVector.unit(m, n_alg + 2)
        col = apply_Adagger(chain, apply_A(chain, e_m)).coeffs
        target = np.zeros(n_alg + 3)
        target[m] = op.a[m]
        if m >= 1:
            target[m - 1] = op.b[m - 1]
        target[m + 1] = op.b[m]
        dev_h = max(dev_h, float(np.max(np.abs(col - target[: n_alg + 3]))))
        colp = apply_A(chain, apply_Adagger(chain, e_m)).coeffs
        targetp = np.zeros(n_alg + 3)
        targetp[m] = h_plus.a[m]
        if m >= 1:
            targetp[m - 1] = h_plus.b[m - 1]
        targetp[m + 1] = h_plus.b[m]
        dev_p = max(dev_p, float(np.max(np.abs(colp - targetp[: n_alg + 3]))))
    add("ladder-AdagA", dev_h / scale)
    add("partner-AAdag", dev_p / scale)

    dev_a, dev_b = shape_invariance_residual(model, n_alg)
    add("shape-invariance", max(dev_a, dev_b) / scale)

    e1 = epsilon1(model)
    if params.variant == "kinetic":
        e1_table = 0.0
    elif params.variant == "oscillator":
        e1_table = 2.0 * params.omega
    else:
        e1_table = 0.5 * params.alpha ** 2 * (2 * params.D - 1)
    add("eps1-value", abs(e1 - e1_table))
    add("eps1-n-independence", epsilon1_n_independence(model, n_alg))

    comm_table = {"kinetic": 0.0, "oscillator": 2.0 * params.omega,
                  "morse": 0.5 * params.alpha ** 2 * (2 * params.D + 1)}[params.variant]
    comm_dev = max(abs(commutator_diagonal(model, n) - comm_table)
                   for n in range(n_alg + 1))
    add("commutator", comm_dev)

    m_top = 10 if model.m_max is None else model.m_max
    add("telescoping", max(telescoping_check(model, m) for m in range(1, m_top + 1)))
    ps_top = 5 if model.m_max is None else model.m_max - 1
    add("partner-spectrum",
        max(abs(partner_spectrum(model, m) - spectrum(model, m + 1))
            for m in range(0, ps_top + 1)))

    grid = np.linspace(-1.0, 3.0, 81) if params.variant == "morse" \
        else np.linspace(0.1, 5.0, 81)
    add("partner-potential", models.partner_potential_residual(params, grid))

    dev_hier = 0.0
    shifted_model = model.shift()
    for k in range(4):
        zeroed_up, shifted_lvl = hierarchy(shifted_model, k)[0], hierarchy(model, k)[1]
        e1_k = epsilon1(model, model.eta + k * model.delta)
        for n in range(20):
            dev_hier = max(dev_hier,
                           abs(shifted_lvl.a_at(n) - zeroed_up.a_at(n) - e1_k),
                           abs(shifted_lvl.b_at(n) - zeroed_up.b_at(n)))
    add("hierarchy", dev_hier / scale)

    m_inv = 20 if model.m_max is None else model.m_max
    rebuilt = inverse_construct(model_spectrum(model), model.c_sq(0), model.d_sq(1), m_inv)
    dev_inv = 0.0
    for m in range(m_inv + 1):
        dev_inv = max(dev_inv, abs(rebuilt.c[m] ** 2 - model.c_sq(m))
                      / max(abs(model.c_sq(m)), 1.0))
        dev_inv = max(dev_inv, abs(rebuilt.d[m] ** 2 - model.d_sq(m))
                      / max(abs(model.d_sq(m)), 1.0))
    add("inverse-roundtrip", dev_inv)

    if params.variant != "kinetic":
        gse = states.ground_state_coefficients(model, 60)
        image = apply_A(model.ladder(60), gse.coefficients())
        add("annihilation", float(np.linalg.norm(image.coeffs[:59])))

        state = states.coherent_coefficients(model, 0.0, 2 if model.m_max else 20)
        ground = np.zeros_like(state.energy_coeffs)
        ground[0] = 1.0
        add("coherent-ground", float(np.max(np.abs(state.energy_coeffs - ground))))

    if params.variant == "oscillator":
        n_gs = 80
        wf = states.ground_wavefunction(params, grid, n_gs)
        add("groundstate-closed-form-oscillator",
            float(np.max(np.abs(wf.values - states.ground_state_closed_form(params, grid)))))
        alt = replace(params, scale=1.3)
        wf_alt = states.ground_wavefunction(alt, grid, n_gs)
        add("scale-invariance", float(np.max(np.abs(wf.values - wf_alt.values))))

        add("moment", max(states.moment_check(model, lambda x: 4.0 * params.omega, n)[2]
                          for n in range(9)))

        low_params = replace(params, scale=1.5)
        add("lowering", max(states.lowering_check_oscillator(low_params, m, 60)
                            for m in (1, 2, 3)))
        add("lowering-annihilation", states.lowering_check_oscillator(low_params, 0, 60))

        big = states.coherent_coefficients(model, 1.0, 60)
        add("coherent-normalization", abs(big.norm_sq() - 1.0))

    if params.variant == "morse":
        n_gs = 800
        wf = states.ground_wavefunction(params, grid, n_gs)
        add("groundstate-closed-form-morse",
            float(np.max(np.abs(wf.values - states.ground_state_closed_form(params, grid)))))
        alt = replace(params, scale=1.5)
        wf_alt = states.ground_wavefunction(alt, grid, n_gs)
        add("scale-invariance", float(np.max(np.abs(wf.values - wf_alt.values))))

        add("product-term",
            max(abs(states.product_term(model, n) - states.morse_product_closed_form(params, n))
                / states.morse_product_closed_form(params, n)
                for n in range(1, model.m_max + 1)))

        w_grid = np.linspace(-1.0, 3.0, 81)
        w_series = states.superpotential_eval(params, w_grid, 1200)
        w_exact = states.morse_superpotential_closed_form(params, w_grid)
        add("superpotential", float(np.max(np.abs(w_series.values - w_exact))))


def cmd_verify(args):
    catalogue = [models.kinetic(l=0, lam=1.0),
                 models.oscillator(l=0, omega=1.0, lam=2.0),
                 models.morse(alpha=1.0, D=2.0, gamma=2.0)]
    if args.model:
        catalogue = [p for p in catalogue if p.variant == args.model]
    results = []
    for params in catalogue:
        _verify_model(params, results)
    if args.perturb is not None:
        try:
            idx = int(args.perturb.split("=")[-1])
        except ValueError:
            raise ConfigError(f"bad --perturb spec {args.perturb!r}; expected n=INDEX")
        for params in catalogue:
            bad = _perturbed(models.make_model(params), idx)
            results.append(("eps1-n-independence", f"{params.variant}(perturbed)",
                            float(epsilon1_n_independence(bad, 40))))

    rows = []
    all_pass = True
    for ident, label, dev in results:
        thr = VERIFY_THRESHOLDS[ident.split("(")[0]] if ident in VERIFY_THRESHOLDS \
            else VERIFY_THRESHOLDS[ident]
        ok = dev <= thr
        all_pass = all_pass and ok
        rows.append({"identity": ident, "model": label, "deviation": dev,
                     "threshold": thr, "pass": ok})
    if args.json:
        text = json.dumps({"results": rows, "all_pass": all_pass}, indent=2) + "\n"
    else:
        lines = []
        for r in rows:
            lines.append(f"{r['identity']:<36} {r['model']:<22} "
                         f"max_dev={r['deviation']:.3e} thr={r['threshold']:.1e} "
                         f"{'PASS' if r['pass'] else 'FAIL'}")
        lines.append("all identities PASS" if all_pass else "verification FAILED")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if all_pass else 4


# ---------------------------------------------------------------- main

def build_parser():
    parser = argparse.ArgumentParser(
        prog="trisusy",
        description="Shape-invariant tridiagonal Hamiltonians: spectra, SUSY partners, "
                    "hierarchy, coherent states, superpotential.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="energy levels and partner levels")
    _add_model_args(sp)
    sp.add_argument("--m-max", type=int, default=8)
    _add_output_args(sp, formats=("table", "csv", "json"))
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("factorize", help="ladder coefficients of a chain")
    _add_model_args(sp)
    sp.add_argument("--input", default=None, help="tridiagonal operator JSON")
    sp.add_argument("--eps0", type=float, default=0.0, help="ground-state energy")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--roundtrip", action="store_true",
                    help="recompose and print the max residual")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("partner", help="supersymmetric partner matrix elements")
    _add_model_args(sp)
    sp.add_argument("--input", default=None, help="ladder coefficients JSON")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_partner)

    sp = sub.add_parser("hierarchy", help="partner-hierarchy coefficient table")
    _add_model_args(sp)
    sp.add_argument("--k-max", type=int, default=3)
    sp.add_argument("--N", type=int, default=20)
    _add_output_args(sp, formats=("table", "csv", "json"))
    sp.set_defaults(func=cmd_hierarchy)

    sp = sub.add_parser("inverse", help="rebuild a chain from a spectrum plus seeds")
    _add_model_args(sp)
    sp.add_argument("--spectrum-file", default=None, help="JSON array [eps_0, eps_1, ...]")
    sp.add_argument("--c0-sq", type=float, default=None)
    sp.add_argument("--d1-sq", type=float, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--validate", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_inverse)

    sp = sub.add_parser("groundstate", help="ground-state wavefunction on a grid")
    _add_model_args(sp)
    sp.add_argument("--grid", default=None, help="start:stop:num")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--compare-closed-form", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_groundstate)

    sp = sub.add_parser("coherent", help="coherent-state coefficients")
    _add_model_args(sp)
    sp.add_argument("--z-re", type=float, default=0.0)
    sp.add_argument("--z-im", type=float, default=0.0)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_coherent)

    sp = sub.add_parser("superpotential", help="superpotential on a grid")
    _add_model_args(sp)
    sp.add_argument("--grid", default=None, help="start:stop:num")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--channel", choices=("series", "fd"), default="series")
    sp.add_argument("--compare-closed-form", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_superpotential)

    sp = sub.add_parser("verify", help="run the identity battery; exit 0 iff all pass")
    sp.add_argument("--model", choices=_MODEL_CHOICES, default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--perturb", default=None, metavar="n=INDEX",
                    help="inject a c^2 defect and report the detection")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2
    except NumericDomainError as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
