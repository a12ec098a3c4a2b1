import sys
from pathlib import Path

import pytest
from pytest import FixtureRequest, fixture

from block_sparse_mac.harness.plan import ExperimentPlan
from block_sparse_mac.harness.plan_file_loader import load_plan_file


@fixture
def root_dir(request: FixtureRequest) -> Path:
    return request.config.rootpath


@fixture
def plans_path(root_dir: Path) -> Path:
    plans_path = root_dir / "plans"
    if not plans_path.is_dir():
        pytest.skip("Needs the plan files shipped in plans/")
    return plans_path


@fixture
def desk_plan(plans_path: Path) -> ExperimentPlan:
    return load_plan_file(plans_path / "desk_default.plan")


# every test runs inside its own tmpdir, so output files never collide
@fixture(autouse=True)
def go_to_tmpdir(request: FixtureRequest):
    tmpdir = request.getfixturevalue("tmpdir")
    sys.path.insert(0, str(tmpdir))
    with tmpdir.as_cwd():
        yield
    sys.path.remove(str(tmpdir))
