# src/utils/atomic_write.py
import os
import tempfile


def write_text_atomic(path: str, text: str) -> str:
    """
    Write `text` to `path` through a sibling '.part' file and os.replace.

    Readers see either the old file or the complete new one. Never leaves a
    '.part' file behind on errors (the error is re-raised). Returns the path.
    """
    out_dir = os.path.dirname(os.path.abspath(path))
    os.makedirs(out_dir, exist_ok=True)

    tmp_path = None
    try:
        fd, tmp_path = tempfile.mkstemp(dir=out_dir, prefix=os.path.basename(path) + ".", suffix=".part")
        # newline="" keeps LF endings on every platform
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
        return path
    except Exception:
        try:
            if tmp_path and os.path.exists(tmp_path):
                os.remove(tmp_path)
        except Exception:
            pass
        raise
