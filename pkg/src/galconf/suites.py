"""Named verification suites; each returns a Report for one model."""
from __future__ import annotations

from . import group_action as ga
from . import noether
from . import phase_space as ps
from . import quasi_invariance as qi
from .model import ModelConfig
from .report import Report

SUITES = ("algebra", "group", "noether", "appendix")


def algebra_suite(cfg: ModelConfig) -> Report:
    rep = Report(cfg.as_dict())
    table = ps.bracket_table(cfg)
    rep.extend(ps.verify_structure_constants(cfg, table))
    rep.extend(ps.verify_closure(cfg, table))
    rep.extend(ps.verify_conservation(cfg))
    rep.extend(ps.verify_actions(cfg))
    rep.extend(ps.verify_schrodinger(cfg))
    return rep


def group_suite(cfg: ModelConfig) -> Report:
    rep = Report(cfg.as_dict())
    for spec in ga.standard_specs(cfg):
        rep.extend(ga.verify_prolongation(cfg, spec))
    rep.extend(ga.verify_conformal_flow(cfg))
    rep.extend(ga.verify_group_laws(cfg))
    rep.extend(ga.verify_vector_fields(cfg))
    rep.extend(ga.verify_infinitesimal_consistency(cfg))
    return rep


def noether_suite(cfg: ModelConfig) -> Report:
    return noether.correspondence_check(cfg)


def appendix_suite(cfg: ModelConfig) -> Report:
    rep = qi.verify_appendix(cfg)
    bad = qi.identity_check(12)
    rep.add("appendix/trinomial-identity", "trinomial identity for all n <= 12",
            "identity used to solve the recurrence", not bad, str(bad[:5]))
    return rep


_RUNNERS = {"algebra": algebra_suite, "group": group_suite,
            "noether": noether_suite, "appendix": appendix_suite}


def run(cfg: ModelConfig, suite: str = "all") -> Report:
    names = SUITES if suite == "all" else (suite,)
    rep = Report(cfg.as_dict())
    for name in names:
        rep.extend(_RUNNERS[name](cfg))
    return rep
