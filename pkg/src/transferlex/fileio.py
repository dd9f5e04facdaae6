"""Small file-writing helpers."""

import os
import tempfile


def atomic_write_text(path, text):
    """Write text to path via a temp file + rename so readers never see a
    partially written file and failed runs leave no artifact behind."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
