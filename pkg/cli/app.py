# cli/app.py
import functools
import logging
import os
import sys
from collections import Counter

import click
from attrs import define, field

# ensure project root is on path when running via `python cli/app.py`
sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from settings import effective_config
from core import catalog, codec, selftest
from core.cocycle import (classify, cohomologous, find_coboundary_witness, is_symmetric, realize, tabulate,
                          trace, validate)
from core.errors import AlgebraError, SearchSpaceTooLarge
from core.forms import brute_force_polar_witness, is_polar, polarization, quadratic_table_defect
from core.model import SkeletalModel, check_all, perturbations, rejected
from core.strictify import can_strictify, polar_cover

log = logging.getLogger("polarcat")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NEGATIVE = 2
EXIT_GUARD = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


@define
class Job:
    """Effective settings plus the output sink of one command run."""
    settings: dict
    output: str = "-"
    flags: dict = field(factory=dict)

    @property
    def guards(self) -> dict:
        return {k: self.settings[k] for k in ("box", "max_candidates", "parallel")}

    def emit(self, doc: dict, **applied) -> None:
        """applied overrides the echoed guards with limits a command actually used."""
        doc = {**doc, "guards": {**self.guards, **applied}}
        text = codec.dumps(doc)
        if self.output == "-":
            click.echo(text)
        else:
            with open(self.output, "w", encoding="utf-8") as f:
                f.write(text + "\n")


def guarded(fn):
    """Common flags for every command; the callback receives a Job first."""
    @click.option("--box", type=click.IntRange(min=1), default=None,
                  help="Free coefficients are sampled from [-box, box] on infinite groups.")
    @click.option("--max-candidates", type=click.IntRange(min=1), default=None,
                  help="Refuse searches with more raw candidates than this.")
    @click.option("--parallel", type=click.IntRange(min=1), default=None,
                  help="Worker processes for partitioned searches and checks.")
    @click.option("--output", type=click.Path(dir_okay=False, allow_dash=True), default="-",
                  help="Write the JSON document here instead of standard output.")
    @click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
                  default=None)
    @functools.wraps(fn)
    def wrapper(box, max_candidates, parallel, output, log_level, **kwargs):
        flags = {"box": box, "max_candidates": max_candidates, "parallel": parallel, "log_level": log_level}
        settings = effective_config(flags)
        logging.basicConfig(level=settings["log_level"].upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)
        return fn(Job(settings, output, {k: v for k, v in flags.items() if v is not None}), **kwargs)
    return wrapper


def read_doc(stream) -> dict:
    return codec.loads(stream.read(), source=getattr(stream, "name", "<input>"))


def cocycle_option(name: str = "--cocycle", default: str | None = "-"):
    return click.option(name, type=click.File("r"), default=default, show_default=True,
                         help="Cocycle document, '-' for standard input.")


def form_option():
    return click.option("--form", "form_file", type=click.File("r"), default="-", show_default=True,
                        help="Quadratic form document, '-' for standard input.")


@click.group()
def main():
    """Quadratic forms, abelian 3-cocycles and strict skeletal braided categorical groups."""


# ---------------------------------------------------------------------- #
# forms
# ---------------------------------------------------------------------- #
@main.group()
def forms():
    """Quadratic forms and polarity."""


@forms.command("is-polar")
@form_option()
@click.option("--brute-force", is_flag=True, help="Also run the exhaustive witness search.")
@guarded
def forms_is_polar(job: Job, form_file, brute_force):
    q = codec.decode_form(read_doc(form_file))
    t = is_polar(q)
    doc = {"polar": t is not None, "witness_t": codec.encode_bilinear(t) if t is not None else None}
    if brute_force:
        w = brute_force_polar_witness(q, job.settings["max_candidates"], job.settings["parallel"])
        doc["brute_force"] = {"polar": w is not None, "witness_t": codec.encode_bilinear(w) if w is not None else None}
    job.emit(doc)
    return EXIT_OK if t is not None else EXIT_NEGATIVE


@forms.command("polarize")
@form_option()
@guarded
def forms_polarize(job: Job, form_file):
    q = codec.decode_form(read_doc(form_file))
    job.emit({"polarization": codec.encode_bilinear(polarization(q))})
    return EXIT_OK


@forms.command("validate")
@form_option()
@guarded
def forms_validate(job: Job, form_file):
    """Generator data is checked on reading; finite sources also get the table identities."""
    q = codec.decode_form(read_doc(form_file))
    doc = {"well_defined": True, "table_checked": q.source.is_finite, "defect": None}
    if q.source.is_finite:
        defect = quadratic_table_defect(q.source, q.table())
        if defect is not None:
            doc["defect"] = {"rule": defect[0], "args": [codec.encode_element(x) for x in defect[1:]]}
    job.emit(doc)
    return EXIT_OK if doc["defect"] is None else EXIT_NEGATIVE


@forms.command("realize")
@form_option()
@click.option("--table", is_flag=True, help="Write the full table instead of the carry formula.")
@guarded
def forms_realize(job: Job, form_file, table):
    """An abelian 3-cocycle whose trace is the given form."""
    q = codec.decode_form(read_doc(form_file))
    kappa = realize(q)
    job.emit(codec.encode_cocycle(tabulate(kappa) if table else kappa))
    return EXIT_OK


# ---------------------------------------------------------------------- #
# cocycle
# ---------------------------------------------------------------------- #
@main.group()
def cocycle():
    """Abelian 3-cocycles."""


@cocycle.command("validate")
@cocycle_option()
@guarded
def cocycle_validate(job: Job, cocycle):
    kappa = codec.decode_cocycle(read_doc(cocycle))
    report = validate(kappa, job.settings["box"], job.settings["parallel"])
    job.emit(codec.encode_validation(report))
    return EXIT_OK if report.valid else EXIT_NEGATIVE


@cocycle.command("trace")
@cocycle_option()
@guarded
def cocycle_trace(job: Job, cocycle):
    kappa = codec.decode_cocycle(read_doc(cocycle))
    q = trace(kappa)
    doc = {"form": codec.encode_form(q)}
    if q.source.is_finite:
        doc["table"] = codec.encode_form_table(q)
    job.emit(doc)
    return EXIT_OK


@cocycle.command("cohomologous")
@cocycle_option()
@cocycle_option("--other", default=None)
@click.option("--witness", is_flag=True, help="Also search for an explicit coboundary witness.")
@guarded
def cocycle_cohomologous(job: Job, cocycle, other, witness):
    if other is None:
        raise click.UsageError("--other is required")
    k1 = codec.decode_cocycle(read_doc(cocycle), "$cocycle")
    k2 = codec.decode_cocycle(read_doc(other), "$other")
    same = cohomologous(k1, k2)
    doc = {"cohomologous": same}
    if witness:
        k = find_coboundary_witness(k1, k2, job.settings["max_candidates"], job.settings["parallel"])
        doc["witness"] = codec.encode_witness(k) if k is not None else None
    job.emit(doc)
    return EXIT_OK if same else EXIT_NEGATIVE


@cocycle.command("enumerate")
@click.option("--group", "group_doc", required=True, help='Group document, e.g. \'{"orders":[2]}\'.')
@click.option("--coeffs", "coeffs_doc", required=True, help="Coefficient group document.")
@click.option("--members", is_flag=True, help="Include every cocycle of every class.")
@guarded
def cocycle_enumerate(job: Job, group_doc, coeffs_doc, members):
    G = codec.decode_group(codec.loads(group_doc, "--group"), "$group")
    M = codec.decode_group(codec.loads(coeffs_doc, "--coeffs"), "$coeffs")
    # an explicit --max-candidates replaces the enumeration ceiling
    limit = job.flags.get("max_candidates", job.settings["enumerate_max_candidates"])
    classes = classify(G, M, limit, job.settings["parallel"])
    out = []
    for q, kappas in classes.items():
        entry = {"trace": codec.encode_form_table(q), "size": len(kappas), "polar": is_polar(q) is not None,
                 "symmetric": sum(1 for k in kappas if is_symmetric(k))}
        if members:
            entry["members"] = [codec.encode_cocycle(k) for k in kappas]
        out.append(entry)
    job.emit({"group": codec.encode_group(G), "coeffs": codec.encode_group(M),
              "cocycles": sum(len(k) for k in classes.values()), "classes": out}, max_candidates=limit)
    return EXIT_OK


# ---------------------------------------------------------------------- #
# strictify / polar-cover
# ---------------------------------------------------------------------- #
@main.command("strictify")
@cocycle_option()
@guarded
def strictify_cmd(job: Job, cocycle):
    """A strict skeletal representative, when the trace is polar."""
    kappa = codec.decode_cocycle(read_doc(cocycle))
    decision = can_strictify(kappa)
    if not decision.polar:
        job.emit({"polar": False, "form": codec.encode_form(decision.form)})
        return EXIT_NEGATIVE
    job.emit({"polar": True, "witness_t": codec.encode_bilinear(decision.witness_t),
              "strict_cocycle": codec.encode_cocycle(decision.strict_cocycle)})
    return EXIT_OK


@main.command("polar-cover")
@cocycle_option()
@guarded
def polar_cover_cmd(job: Job, cocycle):
    kappa = codec.decode_cocycle(read_doc(cocycle))
    cover = polar_cover(kappa, job.settings["max_candidates"], job.settings["parallel"])
    job.emit({
        "P": codec.encode_group(cover.P),
        "surjection": codec.encode_homomorphism(cover.surjection),
        "lifted_form": codec.encode_form(cover.lifted_form),
        "witness_t": codec.encode_bilinear(cover.witness_t),
        "strict_cocycle": codec.encode_cocycle(cover.strict_cocycle),
        "pi1": codec.encode_group(cover.pi1),
        "quotient": codec.encode_group(cover.quotient) if cover.quotient is not None else None,
        "fiber_size": cover.fiber_size,
        "comparison_cells": codec.encode_witness(cover.comparison_cells) if cover.comparison_cells else None,
        "cells_status": cover.cells_status,
        "full": cover.full,
    })
    return EXIT_OK


# ---------------------------------------------------------------------- #
# model
# ---------------------------------------------------------------------- #
@main.group()
def model():
    """The skeletal braided categorical group of a cocycle."""


@model.command("check")
@cocycle_option()
@guarded
def model_check(job: Job, cocycle):
    box, parallel = job.settings["box"], job.settings["parallel"]
    m = SkeletalModel.build(codec.decode_cocycle(read_doc(cocycle)), box, parallel)
    reports = check_all(m, box, parallel)
    doc = {r.name: codec.encode_coherence(r) for r in reports}
    doc.update({
        "picard": m.is_picard(box),
        "pi0": codec.encode_group(m.pi0()),
        "pi1": codec.encode_group(m.pi1()),
        "signature_table": {str(x): codec.encode_element(v) for x, v in m.signature_table(box).items()},
    })
    job.emit(doc)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_NEGATIVE


@model.command("example")
@click.argument("name", type=click.Choice(sorted(catalog.EXAMPLES)))
@guarded
def model_example(job: Job, name):
    job.emit(codec.encode_cocycle(catalog.example(name)))
    return EXIT_OK


@model.command("perturb")
@cocycle_option()
@guarded
def model_perturb(job: Job, cocycle):
    """Every unit perturbation of the table must be rejected by some check."""
    m = SkeletalModel.build(codec.decode_cocycle(read_doc(cocycle)), job.settings["box"], job.settings["parallel"])
    m.group.require_finite("model perturb")
    caught = Counter()
    missed = []
    total = 0
    for p in perturbations(m):
        total += 1
        failing = rejected(p, job.settings["parallel"])
        caught.update(failing)
        if not failing:
            missed.append({"component": p.component, "args": [codec.encode_element(x) for x in p.args],
                           "delta": codec.encode_element(p.delta)})
    job.emit({"perturbations": total, "rejected_by": dict(caught), "missed": missed})
    return EXIT_OK if not missed else EXIT_NEGATIVE


# ---------------------------------------------------------------------- #
# selftest
# ---------------------------------------------------------------------- #
@main.command("selftest")
@guarded
def selftest_cmd(job: Job):
    results = selftest.run(job.settings)
    job.emit({
        "passed": all(r.passed for r in results),
        "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                      "detail": r.detail, "seconds": r.seconds} for r in results],
    })
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


def run(argv: list[str] | None = None) -> int:
    """Run one command line and return its exit code."""
    try:
        rv = main.main(args=argv, prog_name="polarcat", standalone_mode=False)
    except SearchSpaceTooLarge as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_GUARD
    except AlgebraError as e:
        log.debug("command failed", exc_info=True)
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID
    except click.ClickException as e:
        e.show()
        return EXIT_INVALID
    except click.exceptions.Abort:
        return EXIT_INVALID
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(run())
