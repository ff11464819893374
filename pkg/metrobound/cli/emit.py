from __future__ import annotations

import csv
from collections.abc import Iterable
from typing import TextIO

from pydantic import TypeAdapter

from metrobound.schemas.records import SweepRecord


def format_value(value: object) -> str:
    """Célula CSV: vazio para None, true/false, floats por repr (ponto decimal)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # repr já usa notação científica para |x| < 1e-4
        return repr(value)
    return str(value)


class RecordSink:
    """Escreve registros em ordem e conta os que têm erro."""

    def __init__(self, stream: TextIO, record_type: type[SweepRecord], fmt: str):
        self.stream = stream
        self.record_type = record_type
        self.fmt = fmt
        self.written = 0
        self.failed = 0
        self._writer: csv.DictWriter | None = None

    def open(self) -> None:
        if self.fmt == "csv":
            self._writer = csv.DictWriter(
                self.stream,
                fieldnames=self.record_type.csv_header(),
                lineterminator="\n",
            )
            self._writer.writeheader()
        else:
            self.stream.write("[")

    def write(self, record: SweepRecord) -> None:
        if record.error is not None:
            self.failed += 1
        if self._writer is not None:
            row = record.csv_row()
            self._writer.writerow({k: format_value(v) for k, v in row.items()})
        else:
            sep = "," if self.written else ""
            self.stream.write(f"{sep}\n{record.model_dump_json()}")
        self.written += 1

    def write_all(self, records: Iterable[SweepRecord]) -> None:
        for record in records:
            self.write(record)

    def close(self) -> None:
        if self._writer is None:
            self.stream.write("\n]\n" if self.written else "]\n")
        self.stream.flush()


def parse_json(text: str, record_type: type[SweepRecord]) -> list[SweepRecord]:
    """Inverso da saída JSON."""
    return TypeAdapter(list[record_type]).validate_json(text)
