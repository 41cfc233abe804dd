"""Command-line surface.

Subcommands: decompose, ar-quiver, pp-eval, functors, localize,
tensor-table, cache save / cache load.  Exit codes: 0 success, 2 parse
errors, 3 math-domain errors, 4 cache errors.  Set PPCAT_CACHE to a
directory to reuse computed catalogues across invocations."""

from __future__ import annotations

import functools
import os
import sys

import click

from . import rep as rep_mod
from .artheory import ar_sequences, build_catalogue, export_ar_quiver, irreducible_map_counts
from .cache import bundle_from_text, bundle_to_text, project_cache_key
from .errors import CacheError, DomainError, ParseError, PpcatError
from .funcat import (
    auslander_algebra,
    composition_series_labels,
    functor_catalogue,
)
from .localization import (
    DefinableSubcatSpec,
    localize_functor,
    quotient_category,
    serre_subcategory,
)
from .ppform import PpPair, evaluate, evaluate_pair
from .project import ProjectFile, parse_project
from .rep import decompose, injective, is_isomorphic, projective, simple
from .tensorcat import diagonal_tensor, tensor_over_base, tensor_table

EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_CACHE = 4


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            click.echo(f"parse error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        except CacheError as exc:
            click.echo(f"cache error: {exc}", err=True)
            sys.exit(EXIT_CACHE)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DOMAIN)
        except PpcatError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DOMAIN)

    return wrapper


def common_options(fn):
    fn = click.option("--field", "field_override", default=None, help="Override the project field (Q or F<p>).")(fn)
    fn = click.option("--max-dim", default=None, type=int, help="Catalogue bound: maximal total dimension.")(fn)
    fn = click.option("--max-entries", default=None, type=int, help="Catalogue bound: maximal entry count.")(fn)
    fn = click.option("--seed", default=0, type=int, help="Seed for randomized isomorphism search.")(fn)
    return fn


def load_project(path: str, field_override: str | None) -> tuple[ProjectFile, str]:
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read project file: {exc}") from None
    if field_override:
        lines = [
            line for line in text.splitlines() if not line.split("#")[0].strip().startswith("field")
        ]
        text = f"field {field_override}\n" + "\n".join(lines) + "\n"
    return parse_project(text), text


def catalogue_bounds(project: ProjectFile, max_dim, max_entries) -> dict:
    bounds = {}
    if "max_total_dim" in project.bounds:
        bounds["max_total_dim"] = project.bounds["max_total_dim"]
    if "max_entries" in project.bounds:
        bounds["max_entries"] = project.bounds["max_entries"]
    if max_dim is not None:
        bounds["max_total_dim"] = max_dim
    if max_entries is not None:
        bounds["max_entries"] = max_entries
    return bounds


def build_bundle(project: ProjectFile, project_text: str, bounds: dict):
    """Base catalogue + Auslander algebra + functor catalogue, going
    through the cache directory when PPCAT_CACHE is set."""
    cache_dir = os.environ.get("PPCAT_CACHE")
    cache_path = None
    if cache_dir:
        cache_path = os.path.join(cache_dir, project_cache_key(project_text) + ".json")
        if os.path.exists(cache_path):
            text = open(cache_path, "r", encoding="utf-8").read()
            return bundle_from_text(text, project.algebra)
    base_cat = build_catalogue(project.algebra, **bounds)
    if not base_cat.complete:
        raise DomainError("base catalogue bounds exceeded; raise --max-dim/--max-entries")
    aus = auslander_algebra(base_cat)
    fcat = functor_catalogue(aus, **bounds)
    if not fcat.complete:
        raise DomainError("functor catalogue bounds exceeded")
    if cache_path:
        os.makedirs(cache_dir, exist_ok=True)
        with open(cache_path, "w", encoding="utf-8") as fh:
            fh.write(bundle_to_text(base_cat, aus, fcat))
    return base_cat, aus, fcat


def classify_rep(alg, rep) -> str | None:
    for v in range(alg.nsorts):
        if rep.dims == projective(alg, v).dims and is_isomorphic(rep, projective(alg, v)):
            return f"P({alg.sort_labels[v]})"
    for v in range(alg.nsorts):
        if rep.dims == injective(alg, v).dims and is_isomorphic(rep, injective(alg, v)):
            return f"I({alg.sort_labels[v]})"
    for v in range(alg.nsorts):
        if rep.dims == simple(alg, v).dims and is_isomorphic(rep, simple(alg, v)):
            return f"S({alg.sort_labels[v]})"
    return None


@click.group()
def main():
    """Exact computation with bound quiver representations, pp formulas,
    functor categories, localization and induced tensor products."""


@main.command("decompose")
@click.argument("project_path", type=click.Path())
@click.argument("rep_name")
@common_options
@guarded
def cmd_decompose(project_path, rep_name, field_override, max_dim, max_entries, seed):
    """Decompose a named representation into indecomposables."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, _ = load_project(project_path, field_override)
    if rep_name not in project.reps:
        raise DomainError(f"unknown representation {rep_name!r}")
    x = project.reps[rep_name]
    dec = decompose(x)
    alg = project.algebra
    names = []
    for factor, mult in dec.factors:
        label = classify_rep(alg, factor) or "(" + ",".join(str(d) for d in factor.dims) + ")"
        names.extend([label] * mult)
    click.echo(f"{rep_name} = " + (" + ".join(names) if names else "0"))
    for factor, mult in dec.factors:
        label = classify_rep(alg, factor) or "-"
        dims = "(" + ",".join(str(d) for d in factor.dims) + ")"
        click.echo(f"  {mult} x {dims} {label}")


@main.command("ar-quiver")
@click.argument("project_path", type=click.Path())
@click.option("--level", type=click.Choice(["modules", "functors"]), default="modules")
@click.option("--figure", "figure_path", default=None, type=click.Path())
@common_options
@guarded
def cmd_ar_quiver(project_path, level, figure_path, field_override, max_dim, max_entries, seed):
    """Export the AR quiver as DOT (with a summary comment)."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, text = load_project(project_path, field_override)
    bounds = catalogue_bounds(project, max_dim, max_entries)
    if level == "modules":
        cat = build_catalogue(project.algebra, **bounds)
    else:
        _, _, cat = build_bundle(project, text, bounds)
    seqs = ar_sequences(cat) if cat.complete and cat.entries else []
    click.echo(export_ar_quiver(cat, seqs), nl=False)
    if figure_path:
        from .figures import render_ar_quiver

        counts = irreducible_map_counts(cat) if cat.complete and cat.entries else []
        render_ar_quiver(
            cat.labels(),
            counts,
            [(s.right, s.left) for s in seqs],
            figure_path,
            title=f"AR quiver ({level})",
        )


@main.command("pp-eval")
@click.argument("project_path", type=click.Path())
@click.argument("name")
@click.argument("rep_name")
@common_options
@guarded
def cmd_pp_eval(project_path, name, rep_name, field_override, max_dim, max_entries, seed):
    """Evaluate a named formula or pair on a named representation."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, text = load_project(project_path, field_override)
    if rep_name not in project.reps:
        raise DomainError(f"unknown representation {rep_name!r}")
    x = project.reps[rep_name]
    if name in project.formulas:
        sp = evaluate(project.formulas[name], x)
        click.echo(f"{name}({rep_name}): dim = {sp.dim}")
        field = project.field
        for c in range(sp.basis.cols):
            vec = " ".join(field.format(v) for v in sp.basis.column_vector(c))
            click.echo(f"  basis[{c}] = [{vec}]")
    elif name in project.pairs:
        bounds = catalogue_bounds(project, max_dim, max_entries)
        cat = build_catalogue(project.algebra, **bounds)
        phi_name, psi_name = project.pairs[name]
        pair = PpPair(project.formulas[phi_name], project.formulas[psi_name], cat)
        value = evaluate_pair(pair, x)
        click.echo(f"{name}({rep_name}): dim = {value.dim}")
        field = project.field
        for c in range(value.coset_reps.cols):
            vec = " ".join(field.format(v) for v in value.coset_reps.column_vector(c))
            click.echo(f"  coset[{c}] = [{vec}]")
    else:
        raise ParseError(f"unknown formula or pair {name!r}")


@main.command("functors")
@click.argument("project_path", type=click.Path())
@click.option("--figure", "figure_path", default=None, type=click.Path())
@common_options
@guarded
def cmd_functors(project_path, figure_path, field_override, max_dim, max_entries, seed):
    """Table of the indecomposable functors: value grids, composition
    series, projective/injective flags."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, text = load_project(project_path, field_override)
    bounds = catalogue_bounds(project, max_dim, max_entries)
    base_cat, aus, fcat = build_bundle(project, text, bounds)
    simple_names = {i: f"S{i + 1}" for i in range(len(base_cat.entries))}
    click.echo(
        "# simples: "
        + ", ".join(f"S{i + 1}=top of ({base_cat.label(i)},-)" for i in range(len(base_cat.entries)))
    )
    header = ["functor"] + [base_cat.label(i) for i in range(len(base_cat.entries))] + [
        "series",
        "flags",
    ]
    click.echo("\t".join(header))
    rows = []
    for k, f in enumerate(fcat.entries):
        flags = ""
        flags += "P" if fcat.projective_flags[k] else ""
        flags += "I" if fcat.injective_flags[k] else ""
        flags += "S" if fcat.simple_flags[k] else ""
        series = composition_series_labels(f, simple_names)
        row = [fcat.label(k)] + [str(d) for d in f.dims] + [series, flags or "-"]
        rows.append(row)
        click.echo("\t".join(row))
    if figure_path:
        from .figures import render_table

        render_table(
            [r[0] for r in rows],
            header[1:],
            [r[1:] for r in rows],
            figure_path,
            title="indecomposable functors",
        )


@main.command("localize")
@click.argument("project_path", type=click.Path())
@click.argument("names", nargs=-1, required=True)
@click.option("--exclude", is_flag=True, help="Interpret NAMES as the excluded indecomposables.")
@common_options
@guarded
def cmd_localize(project_path, names, exclude, field_override, max_dim, max_entries, seed):
    """Localize at the definable subcategory generated by the named
    indecomposables (project rep names or catalogue labels)."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, text = load_project(project_path, field_override)
    bounds = catalogue_bounds(project, max_dim, max_entries)
    base_cat, aus, fcat = build_bundle(project, text, bounds)
    chosen = []
    for name in names:
        if name in project.reps:
            idx = base_cat.find(project.reps[name])
            if idx is None:
                raise DomainError(f"representation {name!r} is not indecomposable")
        else:
            labels = base_cat.labels()
            if name not in labels:
                raise DomainError(f"unknown module name or label {name!r}")
            idx = labels.index(name)
        chosen.append(idx)
    if exclude:
        spec = DefinableSubcatSpec.complement(base_cat, chosen)
    else:
        spec = DefinableSubcatSpec(base_cat, tuple(chosen))
    serre = serre_subcategory(spec, aus, fcat)
    qc = quotient_category(spec, aus, **bounds)
    click.echo(
        "subcategory generated by: "
        + ", ".join(base_cat.label(i) for i in spec.indices)
    )
    click.echo(
        "Serre subcategory (vanishing functors): "
        + (", ".join(fcat.label(i) for i in serre.members) if serre.members else "none")
    )
    click.echo(f"quotient category: {len(qc.functor_catalogue)} indecomposables")
    killed = []
    images: list[tuple[int, object]] = []
    for k, f in enumerate(fcat.entries):
        loc = localize_functor(f, qc)
        if loc.total_dim == 0:
            killed.append(k)
        else:
            images.append((k, loc))
    groups: list[list[int]] = []
    used = set()
    for pos, (k, loc) in enumerate(images):
        if k in used:
            continue
        group = [k]
        used.add(k)
        for k2, loc2 in images[pos + 1 :]:
            if k2 in used:
                continue
            if loc.dims == loc2.dims and is_isomorphic(loc, loc2) is not None:
                group.append(k2)
                used.add(k2)
        if len(group) > 1:
            groups.append(group)
    click.echo("killed: " + (", ".join(fcat.label(i) for i in killed) if killed else "none"))
    if groups:
        for g in groups:
            click.echo("merged: " + " = ".join(fcat.label(i) for i in g))
    else:
        click.echo("merged: none")


@main.command("tensor-table")
@click.argument("project_path", type=click.Path())
@click.option(
    "--structure",
    "structure_name",
    type=click.Choice(["tensor_over_base", "diagonal_tensor"]),
    default=None,
)
@click.option("--figure", "figure_path", default=None, type=click.Path())
@common_options
@guarded
def cmd_tensor_table(
    project_path, structure_name, figure_path, field_override, max_dim, max_entries, seed
):
    """TSV table of pairwise tensor products of the indecomposable
    functors, cells named by composition series."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, text = load_project(project_path, field_override)
    name = structure_name or project.structure
    if name is None:
        raise DomainError("no monoidal structure selected (project or --structure)")
    bounds = catalogue_bounds(project, max_dim, max_entries)
    base_cat, aus, fcat = build_bundle(project, text, bounds)
    if name == "tensor_over_base":
        ms = tensor_over_base(project.algebra)
    else:
        ms = diagonal_tensor(project.algebra)
    simple_names = {i: f"S{i + 1}" for i in range(len(base_cat.entries))}

    def namer(f):
        return composition_series_labels(f, simple_names)

    table = tensor_table(aus, fcat, ms, namer)
    click.echo(
        "# simples: "
        + ", ".join(f"S{i + 1}=top of ({base_cat.label(i)},-)" for i in range(len(base_cat.entries)))
    )
    click.echo(table.render_tsv(), nl=False)
    if figure_path:
        from .figures import render_table
        from .tensorcat import format_cell

        render_table(
            table.labels,
            table.labels,
            [[format_cell(c) for c in row] for row in table.cells],
            figure_path,
            title=f"tensor table ({name})",
        )


@main.group("cache")
def cmd_cache():
    """Persist and reload computed catalogues."""


@cmd_cache.command("save")
@click.argument("project_path", type=click.Path())
@click.argument("cache_path", type=click.Path())
@common_options
@guarded
def cmd_cache_save(project_path, cache_path, field_override, max_dim, max_entries, seed):
    """Compute the catalogues for a project and write them to a file."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, _ = load_project(project_path, field_override)
    bounds = catalogue_bounds(project, max_dim, max_entries)
    base_cat = build_catalogue(project.algebra, **bounds)
    if not base_cat.complete:
        raise DomainError("base catalogue bounds exceeded")
    aus = auslander_algebra(base_cat)
    fcat = functor_catalogue(aus, **bounds)
    with open(cache_path, "w", encoding="utf-8") as fh:
        fh.write(bundle_to_text(base_cat, aus, fcat))
    click.echo(f"saved {len(base_cat)} modules, {len(fcat)} functors to {cache_path}")


@cmd_cache.command("load")
@click.argument("project_path", type=click.Path())
@click.argument("cache_path", type=click.Path())
@common_options
@guarded
def cmd_cache_load(project_path, cache_path, field_override, max_dim, max_entries, seed):
    """Validate a cache file against a project and print its summary."""
    rep_mod.DEFAULT_ISO_SEED = seed
    project, _ = load_project(project_path, field_override)
    try:
        text = open(cache_path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise CacheError(f"cannot read cache: {exc}") from None
    base_cat, aus, fcat = bundle_from_text(text, project.algebra)
    click.echo(
        f"cache OK: {len(base_cat)} modules, Auslander algebra dim {aus.algebra.dim}, "
        f"{len(fcat)} functors"
    )


if __name__ == "__main__":
    main()
