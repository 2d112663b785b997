"""Run manifest: config snapshot, version stamp, per-stage file hashes.

Every stage records the content hashes of the files it read and wrote,
plus counters (clipped values, emitted warnings). The preprocess and
generate stages use the recorded hashes to skip work whose inputs and
config have not changed.
"""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__

MANIFEST_NAME = "manifest.json"


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def hash_files(root: Path, paths: list[Path]) -> dict[str, str]:
    """Map path-relative-to-root -> sha256, sorted by path."""
    out = {}
    for p in sorted(paths, key=lambda p: p.as_posix()):
        rel = p.relative_to(root).as_posix() if p.is_relative_to(root) else p.as_posix()
        out[rel] = file_sha256(p)
    return out


def dict_digest(payload: dict) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()
    ).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def git_commit(start: Path) -> str | None:
    """Best-effort commit id from a .git directory at or above ``start``."""
    try:
        for cand in [start, *start.resolve().parents]:
            head = cand / ".git" / "HEAD"
            if head.exists():
                text = head.read_text().strip()
                if text.startswith("ref:"):
                    ref = cand / ".git" / text.split(None, 1)[1]
                    return ref.read_text().strip() if ref.exists() else None
                return text
    except OSError:
        return None
    return None


@dataclass
class RunManifest:
    config: dict
    version: str = __version__
    commit: str | None = None
    stages: dict[str, dict] = field(default_factory=dict)

    def record_stage(
        self,
        name: str,
        key: str,
        inputs: dict[str, str],
        outputs: dict[str, str],
        counters: dict[str, int] | None = None,
        started: str | None = None,
    ) -> dict:
        record = {
            "key": key,
            "inputs": inputs,
            "outputs": outputs,
            "counters": dict(counters or {}),
            "started": started or _now(),
            "finished": _now(),
        }
        self.stages[name] = record
        return record

    def stage_is_current(self, name: str, key: str, root: Path) -> bool:
        """True when the stage ran with this key and its outputs are intact."""
        record = self.stages.get(name)
        if record is None or record.get("key") != key:
            return False
        for rel, digest in record.get("outputs", {}).items():
            path = root / rel
            if not path.exists() or file_sha256(path) != digest:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "commit": self.commit,
            "config": self.config,
            "stages": self.stages,
        }

    def save(self, out_dir: str | Path) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / MANIFEST_NAME
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path

    @classmethod
    def load(cls, out_dir: str | Path) -> "RunManifest":
        path = Path(out_dir) / MANIFEST_NAME
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls(
            config=payload.get("config", {}),
            version=payload.get("version", __version__),
            commit=payload.get("commit"),
            stages=payload.get("stages", {}),
        )

    @classmethod
    def open_or_create(cls, out_dir: str | Path, config: dict) -> "RunManifest":
        """Load an existing manifest (refreshing the config snapshot) or
        start a new one."""
        try:
            manifest = cls.load(out_dir)
            manifest.config = config
            manifest.version = __version__
        except (OSError, json.JSONDecodeError):
            manifest = cls(config=config)
        if manifest.commit is None:
            manifest.commit = git_commit(Path(out_dir))
        return manifest
