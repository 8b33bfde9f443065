"""fdroof command line: tables, CSV and SVG reports for all analyses.

Exit codes: 0 success, 1 computation error, 2 usage/validation error.
All output except bench wall-clock measurements is deterministic for fixed
inputs; SVG/CSV artifacts are byte-stable.
"""

import argparse
import os
import statistics
import sys

from . import analysis, charts, cost as cost_mod, kernel
from .equations import equation_registry, get_equation, operational_intensity
from .errors import (
    FdroofError,
    RegistryConflictError,
    RegistryParseError,
    ValidationError,
)
from .formatting import csv_line, fmt
from .machines import (
    attainable_performance,
    classify_boundedness,
    get_machine,
    machine_registry,
    ridge_point,
)

CONFIG_DIR_ENV = "FDROOF_CONFIG_DIR"
DEFAULT_COST_MACHINES = "xeon-e5-2697v2-2s,phi-7120a"


def _registries(args):
    mfiles, efiles = [], []
    cfg_dir = os.environ.get(CONFIG_DIR_ENV)
    if cfg_dir:
        for stem, bucket in (("machines", mfiles), ("equations", efiles)):
            for ext in (".yaml", ".yml"):
                path = os.path.join(cfg_dir, stem + ext)
                if os.path.isfile(path):
                    bucket.append(path)
    mfiles.extend(args.machines_file)
    efiles.extend(args.equations_file)
    return machine_registry(mfiles), equation_registry(efiles)


def _table(headers, rows) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(c.rjust(w) if i else c.ljust(w)
                         for i, (c, w) in enumerate(zip(cells, widths)))
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([line(headers), sep] + [line(r) for r in rows])


def _split_csv_arg(value, what):
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise ValidationError(f"{what} list is empty")
    return items


# ---------------------------------------------------------------- machines

def cmd_machines(args):
    machines, _ = _registries(args)
    if args.action == "show":
        if not args.name:
            raise ValidationError("machines show requires a machine name")
        m = get_machine(args.name, machines)
        print(f"name:                     {m.name}")
        print(f"peak GFLOPS theoretical:  {fmt(m.peak_gflops_theoretical) if m.peak_gflops_theoretical else '-'}")
        print(f"peak GB/s   theoretical:  {fmt(m.peak_bw_theoretical) if m.peak_bw_theoretical else '-'}")
        print(f"peak GFLOPS achievable:   {fmt(m.peak_gflops_achievable) if m.peak_gflops_achievable else '-'}")
        print(f"peak GB/s   achievable:   {fmt(m.peak_bw_achievable) if m.peak_bw_achievable else '-'}")
        if m.has_achievable_rates:
            print(f"ridge point I_min:        {fmt(ridge_point(m))} FLOPs/byte")
        print(f"precision bytes:          {m.precision_bytes}")
        if m.arch:
            a = m.arch
            print(f"arch:                     {a.simd_lanes_sp} lanes x {a.fma_ops_per_cycle} fma x "
                  f"{a.cores} cores x {a.sockets} sockets @ {fmt(a.clock_ghz)} GHz")
        if m.mem:
            mm = m.mem
            print(f"mem:                      {fmt(mm.transfer_rate_mts)} MT/s x {mm.channels} ch x "
                  f"{mm.bytes_per_channel} B x {mm.sockets} sockets")
        if m.notes:
            print(f"notes:                    {m.notes}")
        return 0
    names = sorted(machines)
    if args.format == "csv":
        print("name,peak_gflops_theoretical,peak_bw_theoretical,"
              "peak_gflops_achievable,peak_bw_achievable,ridge_point,precision_bytes")
        for n in names:
            m = machines[n]
            rp = ridge_point(m) if m.has_achievable_rates else None
            print(csv_line([m.name, m.peak_gflops_theoretical, m.peak_bw_theoretical,
                            m.peak_gflops_achievable, m.peak_bw_achievable, rp,
                            m.precision_bytes]))
        return 0
    rows = []
    for n in names:
        m = machines[n]
        rows.append([
            m.name,
            fmt(m.peak_gflops_theoretical) if m.peak_gflops_theoretical else "-",
            fmt(m.peak_bw_theoretical) if m.peak_bw_theoretical else "-",
            fmt(m.peak_gflops_achievable) if m.peak_gflops_achievable else "-",
            fmt(m.peak_bw_achievable) if m.peak_bw_achievable else "-",
            fmt(ridge_point(m)) if m.has_achievable_rates else "-",
        ])
    print(_table(
        ["machine", "F_theo[GFLOPS]", "B_theo[GB/s]", "F_ach[GFLOPS]", "B_ach[GB/s]", "I_min"],
        rows,
    ))
    return 0


# ---------------------------------------------------------------------- oi

def cmd_oi(args):
    machines, equations = _registries(args)
    eq = get_equation(args.equation, equations)
    k = analysis.order_to_k(args.order)
    machine = get_machine(args.machine, machines) if args.machine else None
    precision = args.precision or (machine.precision_bytes if machine else 4)
    res = operational_intensity(eq, k, precision)
    values = [
        ("equation", eq.name),
        ("order", str(args.order)),
        ("k", str(k)),
        ("kernel_flops", str(res.kernel_flops)),
        ("bytes_per_point", str(res.bytes_per_point)),
        ("oi", fmt(res.oi)),
    ]
    if machine:
        att = attainable_performance(machine, float(res.oi))
        values.append(("machine", machine.name))
        values.append(("attainable_gflops", fmt(att)))
        values.append(("bound", classify_boundedness(machine, float(res.oi))))
    if args.format == "csv":
        print(",".join(k for k, _ in values))
        print(",".join(v for _, v in values))
    else:
        for key, v in values:
            print(f"{key}: {v}")
    return 0


# --------------------------------------------------------------- min-order

def cmd_min_order(args):
    machines, equations = _registries(args)
    eq = get_equation(args.equation, equations)
    machine = get_machine(args.machine, machines)
    order = analysis.min_compute_bound_order(eq, machine)
    if order is None:
        print(f"{eq.name} on {machine.name}: never "
              f"(no order <= {analysis.MAX_ORDER} reaches I_min "
              f"{fmt(ridge_point(machine))})")
    else:
        oi = float(operational_intensity(eq, order + 1, machine.precision_bytes).oi)
        print(f"{eq.name} on {machine.name}: minimum compute-bound order {order} "
              f"(k={order + 1}, OI {fmt(oi)} >= I_min {fmt(ridge_point(machine))})")
    return 0


# ---------------------------------------------------------------- roofline

def _parse_point_specs(spec_str):
    """eq:order or eq:lo..hi entries, comma separated."""
    entries = []
    for item in _split_csv_arg(spec_str, "points"):
        if ":" not in item:
            raise ValidationError(f"point '{item}' must look like eq:order or eq:lo..hi")
        name, _, orders = item.partition(":")
        try:
            if ".." in orders:
                lo, hi = orders.split("..", 1)
                span = range(int(lo), int(hi) + 1)
                entries.extend((name, o) for o in span if o % 2 == 0)
            else:
                entries.append((name, int(orders)))
        except ValueError:
            raise ValidationError(f"bad order specification in '{item}'") from None
    return entries


def cmd_roofline(args):
    machines, equations = _registries(args)
    machine = get_machine(args.machine, machines)
    measured = {}
    for spec in args.measured or ():
        label, sep, value = spec.partition("=")
        if not sep:
            raise ValidationError(f"--measured needs label=gflops, got '{spec}'")
        try:
            measured[label] = float(value)
        except ValueError:
            raise ValidationError(f"bad measured value in '{spec}'") from None
    points = []
    if args.points:
        for name, order in _parse_point_specs(args.points):
            eq = get_equation(name, equations)
            label = f"{name}:{order}"
            points.append((eq, analysis.order_to_k(order),
                           measured.pop(label, None), label))
    if measured:
        raise ValidationError(
            f"--measured labels {sorted(measured)} match no requested point"
        )
    dataset = analysis.roofline_dataset(machine, points)
    ref = charts.DEFAULT_REFERENCE_MARKERS if args.ref_markers else ()
    charts.write_svg(charts.roofline_chart(dataset, ref_markers=ref), args.svg)
    print(f"wrote {args.svg}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dataset.to_csv())
        print(f"wrote {args.csv}")
    for p in dataset.inconsistencies():
        print(f"warning: {p.label} measured {fmt(p.measured_gflops)} GFLOPS exceeds "
              f"the model bound {fmt(p.attainable_gflops)}; check the inputs")
    return 0


# ---------------------------------------------------------------- oi-curve

def cmd_oi_curve(args):
    machines, equations = _registries(args)
    eqs = [get_equation(n, equations) for n in _split_csv_arg(args.equations, "equations")]
    ms = []
    if args.machines:
        ms = [get_machine(n, machines) for n in _split_csv_arg(args.machines, "machines")]
    curves = analysis.oi_curve(eqs, k_min=3, k_max=args.kmax, machines=ms)
    charts.write_svg(charts.oi_curve_chart(curves), args.svg)
    print(f"wrote {args.svg}")
    return 0


# -------------------------------------------------------------------- cost

def cmd_cost(args):
    machines, equations = _registries(args)
    scenario = cost_mod.load_scenario(args.scenario) if args.scenario else cost_mod.CostScenario()
    try:
        orders = [int(o) for o in _split_csv_arg(args.orders, "orders")]
    except ValueError:
        raise ValidationError(f"bad orders list '{args.orders}'") from None
    ms = [get_machine(n, machines) for n in _split_csv_arg(args.machines, "machines")]
    eq = get_equation(args.equation, equations)
    rows = cost_mod.scenario_table(scenario, orders, ms, equation=eq)
    csv_text = cost_mod.cost_csv(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
    if args.format == "csv":
        print(csv_text, end="")
        return 0
    headers = ["order", "a2", "p", "h", "dt", "N", "nt", "oi", "GFLOPs"]
    for m in ms:
        headers.append(f"{m.name}[GFLOPS]")
        headers.append(f"{m.name}[roofline]")
        headers.append(f"{m.name}[s]")
    body = []
    for r in rows:
        row = [str(r.order), fmt(r.a2), fmt(r.p), fmt(r.h), fmt(r.dt),
               fmt(r.n_grid), str(r.n_t), fmt(r.oi), fmt(r.total_gflops)]
        for mc in r.machine_costs:
            row.append(fmt(mc.predicted_gflops))
            row.append(fmt(mc.attainable_gflops))
            row.append(str(mc.runtime_s))
        body.append(row)
    print(_table(headers, body))
    if args.csv:
        print(f"wrote {args.csv}")
    return 0


# ------------------------------------------------------------- utilization

def cmd_utilization(args):
    machines, equations = _registries(args)
    eq = get_equation(args.equation, equations)
    machine = get_machine(args.machine, machines)
    k = analysis.order_to_k(args.order)
    n = float(args.grid) ** 3
    achieved = analysis.achieved_gflops(eq, k, n, args.nt, args.runtime)
    oi = float(operational_intensity(eq, k, machine.precision_bytes).oi)
    report = analysis.utilization(achieved, machine, oi)
    print(f"equation:          {eq.name} (k={k})")
    print(f"grid points:       {fmt(n)} ({args.grid}^3)")
    print(f"achieved:          {fmt(report.achieved_gflops)} GFLOPS")
    print(f"oi:                {fmt(oi)} FLOPs/byte")
    print(f"attainable:        {fmt(report.attainable_gflops)} GFLOPS on {machine.name}")
    print(f"utilization:       {report.utilization * 100:.1f}%")
    print(f"headroom:          {report.headroom_factor:.2f}x")
    return 0


# ------------------------------------------------------------------- bench

def cmd_bench(args):
    machines, _ = _registries(args)
    machine = get_machine(args.machine, machines)
    dims = (args.grid, args.grid, args.grid)
    dt = 0.5 * kernel.max_stable_dt(args.order, 1.0)
    cfg = kernel.KernelConfig(order=args.order, dims=dims, n_t=args.nt, dt=dt)
    results = [kernel.run_benchmark(cfg, machine, slabs=args.slabs)
               for _ in range(args.repeat)]
    best = max(results, key=lambda r: r.measured_gflops)
    point = best.point
    print(f"order {args.order} (k={cfg.k}), grid {args.grid}^3, {args.nt} steps")
    print(f"oi:                {fmt(point.oi)} FLOPs/byte (grid-size independent)")
    print(f"attainable:        {fmt(point.attainable_gflops)} GFLOPS on {machine.name} "
          f"({point.bound}-bound)")
    if args.repeat > 1:
        vals = sorted(r.measured_gflops for r in results)
        print(f"measured:          min {fmt(vals[0])} / median "
              f"{fmt(statistics.median(vals))} / max {fmt(vals[-1])} GFLOPS "
              f"over {args.repeat} runs")
    else:
        print(f"measured:          {fmt(best.measured_gflops)} GFLOPS "
              f"in {best.wall_time_s:.3f} s")
    pct = best.measured_gflops / point.attainable_gflops * 100.0
    print(f"of attainable:     {pct:.1f}%")
    if args.dump:
        kernel.dump_wavefield(results[-1].wavefield, args.dump)
        print(f"wrote {args.dump}")
    if args.svg:
        dataset = analysis.RooflineDataset(
            machine=machine,
            points=(point,),
            oi_lo=min(point.oi, analysis.ridge_point(machine)) / 10.0,
            oi_hi=max(point.oi, analysis.ridge_point(machine)) * 10.0,
        )
        charts.write_svg(charts.roofline_chart(dataset), args.svg)
        print(f"wrote {args.svg}")
    return 0


# ------------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(
        prog="fdroof",
        description="Roofline performance prediction for finite-difference "
        "wave-equation kernels.",
    )
    p.add_argument("--machines-file", action="append", default=[], metavar="PATH",
                   help="machine registry file (may repeat; overrides built-ins by name)")
    p.add_argument("--equations-file", action="append", default=[], metavar="PATH",
                   help="equation definition file (may repeat)")
    p.add_argument("--format", choices=("text", "csv"), default="text",
                   help="stdout format for tabular commands")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("machines", help="list or show registry machines")
    sp.add_argument("action", choices=("list", "show"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_machines)

    sp = sub.add_parser("oi", help="operational intensity of one equation/order")
    sp.add_argument("--equation", required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--machine")
    sp.add_argument("--precision", type=int, choices=(4, 8))
    sp.set_defaults(func=cmd_oi)

    sp = sub.add_parser("min-order", help="smallest compute-bound spatial order")
    sp.add_argument("--equation", required=True)
    sp.add_argument("--machine", required=True)
    sp.set_defaults(func=cmd_min_order)

    sp = sub.add_parser("roofline", help="roofline SVG/CSV for one machine")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--points", help="eq:order or eq:lo..hi, comma separated")
    sp.add_argument("--measured", action="append", metavar="LABEL=GFLOPS",
                    help="attach a measurement to a point label (eq:order)")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--csv")
    sp.add_argument("--ref-markers", action="store_true",
                    help="draw literature OI markers (SpMV, 7pt stencil, 3DFFT)")
    sp.set_defaults(func=cmd_roofline)

    sp = sub.add_parser("oi-curve", help="OI vs stencil size SVG")
    sp.add_argument("--equations", required=True)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--machines")
    sp.add_argument("--svg", required=True)
    sp.set_defaults(func=cmd_oi_curve)

    sp = sub.add_parser("cost", help="cost-to-solution table across orders")
    sp.add_argument("--orders", default="2,6,12,18,24")
    sp.add_argument("--machines", default=DEFAULT_COST_MACHINES)
    sp.add_argument("--equation", default="acoustic")
    sp.add_argument("--scenario", help="scenario YAML file")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_cost)

    sp = sub.add_parser("utilization", help="achieved GFLOPS and hardware utilization")
    sp.add_argument("--equation", required=True)
    sp.add_argument("--grid", type=int, required=True, metavar="N_PER_DIM")
    sp.add_argument("--nt", type=int, required=True)
    sp.add_argument("--runtime", type=float, required=True, metavar="SECONDS")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--order", type=int, default=8)
    sp.set_defaults(func=cmd_utilization)

    sp = sub.add_parser("bench", help="run the reference acoustic kernel")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--grid", type=int, required=True, metavar="N_PER_DIM")
    sp.add_argument("--nt", type=int, required=True)
    sp.add_argument("--machine", required=True)
    sp.add_argument("--svg")
    sp.add_argument("--repeat", type=int, default=1)
    sp.add_argument("--slabs", type=int, default=1)
    sp.add_argument("--dump", help="write the final wavefield to PATH (+ .dims sidecar)")
    sp.set_defaults(func=cmd_bench)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, RegistryConflictError, RegistryParseError) as exc:
        print(f"fdroof: error: {exc}", file=sys.stderr)
        return 2
    except (FdroofError, OSError, ZeroDivisionError) as exc:
        print(f"fdroof: {exc}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
