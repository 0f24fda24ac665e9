from __future__ import annotations

import subprocess
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]

FORBIDDEN_PATH_PREFIXES = (
    ".venv/",
    "venv/",
    "runtime_data/",
)

FORBIDDEN_SUBSTRINGS = (
    "/__pycache__/",
)

FORBIDDEN_SUFFIXES = (
    ".pyc",
    ".pyo",
    ".tt3",
)


def _git_ls_files() -> list[str]:
    # tracked files (index), not untracked files
    try:
        out = subprocess.check_output(["git", "ls-files"], text=True, cwd=REPO_ROOT, stderr=subprocess.DEVNULL)
    except (OSError, subprocess.CalledProcessError):
        pytest.skip("not a git checkout")
    return [line.strip() for line in out.splitlines() if line.strip()]


def test_repo_hygiene_no_runtime_or_venv_tracked() -> None:
    offenders: list[str] = []
    for p in _git_ls_files():
        p_norm = p.replace("\\", "/")
        if (
            p_norm.startswith(FORBIDDEN_PATH_PREFIXES)
            or any(s in p_norm for s in FORBIDDEN_SUBSTRINGS)
            or p_norm.endswith(FORBIDDEN_SUFFIXES)
        ):
            offenders.append(p)

    assert not offenders, (
        "Repo hygiene violation: runtime/venv/tensor artifacts are tracked by git.\n"
        "Remove them from the index (git rm --cached) and ensure .gitignore blocks them.\n"
        "Offenders (first 50):\n" + "\n".join(offenders[:50])
    )


def test_gitignore_has_must_have_rules() -> None:
    gi = REPO_ROOT / ".gitignore"
    assert gi.exists(), ".gitignore missing"
    content = gi.read_text(encoding="utf-8")

    must_have = [
        "__pycache__/",
        "*.py[cod]",
        ".venv/",
        "runtime_data/",
        "*.tt3",
    ]
    missing = [p for p in must_have if p not in content]
    assert not missing, f".gitignore missing required patterns: {missing}"
