"""
Rendering of computation results as JSON, CSV or pretty text.
"""

import csv
import io
import json
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

from jinja2 import Template
from pydantic import BaseModel

from src.config import TEMPLATES_DIR
from src.models.schemas import (
    BasisElementModel,
    CacheValidationModel,
    CanonicalExpansionModel,
    CanonicalTermModel,
    CheckModel,
    ComponentModel,
    HallProductModel,
    HallTermModel,
    OrbitModel,
    StalkRowModel,
    StalkTableModel,
    VerificationReportModel,
)
from src.services.hall import HallElement
from src.services.ic import StalkTable, is_rationally_smooth
from src.services.laurent import LaurentPolynomial
from src.services.report import Report
from src.services.repquiver import (
    ComplexType,
    DeformationIndex,
    Multisegment,
    closure_leq,
    component_dimension,
    is_sparse,
    omega,
    orbit_dimension,
)

Document = Union[BaseModel, List[BaseModel]]


def _join(values: Iterable[int]) -> str:
    return ",".join(str(v) for v in values)


def hall_terms(element: HallElement) -> List[HallTermModel]:
    return [
        HallTermModel(multisegment="1" if M.is_zero() else str(M), coefficient=str(c))
        for M, c in element.items()
    ]


class ResultExporter:
    """Turns service results into output text in one of the supported formats."""

    def __init__(self, output_format: str = "json", templates_dir: Path = TEMPLATES_DIR):
        self.output_format = output_format
        self.templates_dir = templates_dir

    # Building blocks

    @staticmethod
    def dump_json(document: Document) -> str:
        if isinstance(document, list):
            data = [item.model_dump() for item in document]
        else:
            data = document.model_dump()
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def dump_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()

    def render_template(self, name: str, **context) -> str:
        template_path = self.templates_dir / name
        with open(template_path, 'r', encoding='utf-8') as f:
            template_content = f.read()
        template = Template(template_content, trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
        return template.render(**context)

    # Stalk tables and components

    @staticmethod
    def stalk_table_model(table: StalkTable) -> StalkTableModel:
        c = table.component
        return StalkTableModel(
            dim=list(c.d),
            r=list(c.r),
            h=list(c.h),
            rows=[
                StalkRowModel(
                    k=list(row.k),
                    orbit_r=list(row.orbit.r),
                    orbit_h=list(row.orbit.h),
                    poincare=row.poincare.as_list(),
                    codim=row.codim,
                )
                for row in table.rows
            ],
        )

    def render_stalks(self, tables: Sequence[StalkTable]) -> str:
        if self.output_format == "json":
            return self.dump_json([self.stalk_table_model(table) for table in tables])
        if self.output_format == "csv":
            return self.dump_csv(
                ["dim", "r", "h", "k", "orbit_r", "orbit_h", "poincare", "codim"],
                [
                    [_join(t.component.d), _join(t.component.r), _join(t.component.h),
                     _join(row.k), _join(row.orbit.r), _join(row.orbit.h), str(row.poincare), row.codim]
                    for t in tables for row in t.rows
                ],
            )
        return self.render_template("stalks.txt.j2", tables=tables)

    @staticmethod
    def component_model(table: StalkTable) -> ComponentModel:
        c = table.component
        return ComponentModel(
            dim=list(c.d),
            r=list(c.r),
            h=list(c.h),
            omega=omega(c),
            dimension=component_dimension(c),
            rationally_smooth=is_rationally_smooth(table),
        )

    def render_components(self, d: Sequence[int], tables: Sequence[StalkTable]) -> str:
        models = [self.component_model(table) for table in tables]
        if self.output_format == "json":
            return self.dump_json(models)
        if self.output_format == "csv":
            return self.dump_csv(
                ["dim", "r", "h", "omega", "dimension", "rationally_smooth"],
                [[_join(m.dim), _join(m.r), _join(m.h), _join(m.omega), m.dimension, m.rationally_smooth]
                 for m in models],
            )
        return self.render_template("components.txt.j2", dim=tuple(d), components=models)

    # Canonical basis

    def render_canonical(self, c: ComplexType, expansion: Dict[DeformationIndex, LaurentPolynomial]) -> str:
        model = CanonicalExpansionModel(
            dim=list(c.d),
            r=list(c.r),
            h=list(c.h),
            terms=[CanonicalTermModel(k=list(k), coefficient=str(value)) for k, value in expansion.items()],
        )
        if self.output_format == "json":
            return self.dump_json(model)
        if self.output_format == "csv":
            return self.dump_csv(["k", "coefficient"], [[_join(t.k), t.coefficient] for t in model.terms])
        return self.render_template("canonical.txt.j2", expansion=model)

    def render_basis(self, d: Sequence[int], basis: Dict[Multisegment, HallElement]) -> str:
        models = [
            BasisElementModel(leading=str(M), element=str(element), terms=hall_terms(element))
            for M, element in basis.items()
        ]
        if self.output_format == "json":
            return self.dump_json(models)
        if self.output_format == "csv":
            return self.dump_csv(
                ["leading", "multisegment", "coefficient"],
                [[m.leading, t.multisegment, t.coefficient] for m in models for t in m.terms],
            )
        return self.render_template("basis.txt.j2", dim=tuple(d), elements=models)

    # Hall products

    def render_hall(self, lhs: Multisegment, rhs: Multisegment, product: HallElement) -> str:
        model = HallProductModel(
            n=lhs.n,
            lhs=str(lhs),
            rhs=str(rhs),
            product=str(product),
            terms=hall_terms(product),
        )
        if self.output_format == "json":
            return self.dump_json(model)
        if self.output_format == "csv":
            return self.dump_csv(["multisegment", "coefficient"], [[t.multisegment, t.coefficient] for t in model.terms])
        return self.render_template("hall.txt.j2", product=model)

    # Orbits

    def render_orbits(self, d: Sequence[int], orbits: Sequence[ComplexType]) -> str:
        models = [
            OrbitModel(
                r=list(c.r),
                h=list(c.h),
                dimension=orbit_dimension(c),
                is_component=is_sparse(omega(c)),
                degenerations=[list(o.r) for o in orbits if o != c and closure_leq(o, c)],
            )
            for c in orbits
        ]
        if self.output_format == "json":
            return self.dump_json(models)
        if self.output_format == "csv":
            return self.dump_csv(
                ["r", "h", "dimension", "is_component", "degenerations"],
                [[_join(m.r), _join(m.h), m.dimension, m.is_component,
                  ";".join(_join(r) for r in m.degenerations)] for m in models],
            )
        return self.render_template("orbits.txt.j2", dim=tuple(d), orbits=models)

    # Reports

    @staticmethod
    def report_model(report: Report) -> VerificationReportModel:
        checks = [CheckModel(suite=c.suite, name=c.name, passed=c.passed, detail=c.detail) for c in report.checks]
        failures = [check for check in checks if not check.passed]
        return VerificationReportModel(
            passed=report.passed,
            total=len(checks),
            failed=len(failures),
            checks=checks,
            failures=failures,
        )

    def render_report(self, report: Report) -> str:
        model = self.report_model(report)
        if self.output_format == "json":
            return self.dump_json(model)
        if self.output_format == "csv":
            return self.dump_csv(
                ["suite", "name", "passed", "detail"],
                [[c.suite, c.name, c.passed, c.detail] for c in model.checks],
            )
        return self.render_template("verify.txt.j2", report=model)

    def render_cache_validation(self, path: Path, entries: int) -> str:
        model = CacheValidationModel(path=str(path), entries=entries, valid=True)
        if self.output_format == "json":
            return self.dump_json(model)
        if self.output_format == "csv":
            return self.dump_csv(["path", "entries", "valid"], [[model.path, model.entries, model.valid]])
        return f"{model.path}: {model.entries} entries, valid\n"
