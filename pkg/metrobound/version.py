from __future__ import annotations

import os

LIBRARY_VERSION = os.getenv("METROBOUND_VERSION", "0.1.0")
# muda quando o cabeçalho de algum CSV muda
CSV_SCHEMA_VERSION = "1"
