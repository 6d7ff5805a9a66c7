"""Batch tooling: template ingestion, synthetic attempt generation, batch
comparison, headless session runs, report emission, and the HTTP service."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import files
from .feedback import FeedbackMode
from .files import SchemaViolation, canonical_json
from .handshape import SwarmConfig
from .samples import ACTIVE_JOINTS
from .session import Lesson, PipelineConfig, PoorTracking
from .skeleton import DegenerateSkeleton, JointId, SignTemplate, normalize
from .store import Conflict, NotFound, Store
from .synth import ErrorSpec, SpecOutOfRange, synth_attempt
from .runner import drive_lesson, replay_log

ENV_STORE = "SIGNCOACH_STORE"
ENV_LISTEN = "SIGNCOACH_LISTEN"


def _load_config(path: str | None) -> dict:
    """Flat key=value config file; '#' starts a comment."""
    if not path:
        return {}
    cfg = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.ClickException(f"config: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def _resolve(flag, config: dict, key: str, env: str | None, default=None):
    """Precedence: flag > config file > environment > default."""
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    if env and env in os.environ:
        return os.environ[env]
    return default


def _error_exit(code: str, message: str, detail=None):
    click.echo(canonical_json({"code": code, "message": message, "detail": detail}))
    sys.exit(2)


def _print_json(doc):
    click.echo(json.dumps(doc, ensure_ascii=False, indent=2))


def _parse_joint(name: str) -> JointId:
    key = name.strip().upper().replace("-", "_")
    try:
        return JointId[key]
    except KeyError:
        raise click.ClickException(f"unknown joint {name!r}")


def _parse_error_spec(text: str, seed: int) -> ErrorSpec:
    """Parse 'kind:key=value,key=value' into an ErrorSpec."""
    kind, _, rest = text.partition(":")
    kw: dict = {"kind": kind.strip(), "seed": seed}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        if "=" not in part:
            raise click.ClickException(f"error spec: expected key=value in {part!r}")
        key, value = (s.strip() for s in part.split("=", 1))
        if key == "joint":
            kw["joint"] = _parse_joint(value)
        elif key == "frames":
            lo, _, hi = value.partition("-")
            kw["frame_range"] = (int(lo), int(hi))
        elif key in ("factor", "magnitude", "amplitude", "frequency", "sigma"):
            kw[key] = float(value)
        elif key in ("keyframe", "keyframe_index"):
            kw["keyframe_index"] = int(value)
        elif key in ("replacement", "replacement_id"):
            kw["replacement_id"] = value
        elif key == "axis":
            kw["axis"] = value
        elif key == "seed":
            kw["seed"] = int(value)
        else:
            raise click.ClickException(f"error spec: unknown key {key!r}")
    try:
        return ErrorSpec(**kw)
    except SpecOutOfRange as e:
        raise click.ClickException(str(e))


@click.group()
@click.option("--store", "store_flag", type=click.Path(), default=None,
              help="Store root directory.")
@click.option("--seed", "seed_flag", type=int, default=None,
              help="Seed for all stochastic components.")
@click.option("--config", "config_flag", type=click.Path(exists=True), default=None,
              help="key=value config file (flags win over config, config over env).")
@click.pass_context
def main(ctx, store_flag, seed_flag, config_flag):
    """Sign-language practice tooling."""
    config = _load_config(config_flag)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    ctx.obj["store"] = _resolve(store_flag, config, "store", ENV_STORE)
    seed = _resolve(seed_flag, config, "seed", None, 0)
    ctx.obj["seed"] = int(seed)


def _open_store(ctx) -> Store:
    root = ctx.obj.get("store")
    if not root:
        raise click.ClickException("no store configured (--store, config, or SIGNCOACH_STORE)")
    return Store(root)


def _pipeline_cfg(seed: int) -> PipelineConfig:
    return PipelineConfig(swarm=SwarmConfig(seed=seed))


def _load_library_from_store(store: Store):
    ids = store.list_ids("hands")
    if not ids:
        raise click.ClickException("store has no handshape library")
    lib_id = "default" if "default" in ids else ids[0]
    return files.parse_library(store.get("hands", lib_id))


@main.command()
@click.argument("recording", type=click.Path(exists=True))
@click.option("--id", "template_id", default=None, help="Template id (defaults to the recording id).")
@click.option("--gloss", default=None)
@click.option("--threshold", type=float, default=60.0)
@click.option("--keyframe", "keyframes", multiple=True,
              help="t_ms:hand:shape_id, repeatable.")
@click.pass_context
def ingest(ctx, recording, template_id, gloss, threshold, keyframes):
    """Normalize a recording and save it to the store as a template."""
    store = _open_store(ctx)
    doc = json.loads(Path(recording).read_text(encoding="utf-8"))
    try:
        rid, rgloss, seq, _hands = files.parse_recording(doc)
        parsed_keyframes = []
        for kf in keyframes:
            t, hand, shape = kf.split(":", 2)
            parsed_keyframes.append((int(t), hand, shape))
        template = SignTemplate(
            id=template_id or rid, gloss=gloss if gloss is not None else rgloss,
            sequence=normalize(seq),
            handshape_keyframes=tuple(parsed_keyframes),
            active_joints=dict(ACTIVE_JOINTS),
            threshold_default=threshold)
        store.put("templates", template.id, files.template_to_dict(template))
    except (SchemaViolation, DegenerateSkeleton, ValueError) as e:
        _error_exit(type(e).__name__, str(e))
    click.echo(f"ingested template {template.id!r} ({len(seq)} frames)")


@main.command()
@click.argument("template_id")
@click.option("--error", "errors", multiple=True,
              help="Error spec 'kind:key=value,...', repeatable, applied in order.")
@click.option("--out", type=click.Path(), default=None,
              help="Output .sign.json (default: store attempts/).")
@click.option("--attempt-id", default=None)
@click.pass_context
def synth(ctx, template_id, errors, out, attempt_id):
    """Generate a synthetic attempt from a stored template."""
    store = _open_store(ctx)
    seed = ctx.obj["seed"]
    try:
        template = files.parse_template(store.get("templates", template_id))
        library = _load_library_from_store(store)
        specs = [_parse_error_spec(e, seed) for e in errors] or [ErrorSpec(kind="none")]
        seq, hands = synth_attempt(template, specs, library)
    except (NotFound, SchemaViolation, SpecOutOfRange) as e:
        _error_exit(type(e).__name__, str(e))
    attempt_id = attempt_id or f"{template_id}-attempt"
    doc = files.recording_to_dict(attempt_id, template.gloss, seq, hands)
    if out:
        files.dump_json(doc, Path(out))
        click.echo(f"wrote {out}")
    else:
        store.put("attempts", attempt_id, doc)
        click.echo(f"stored attempts/{attempt_id}")


def _compare_one(template: SignTemplate, attempt_doc: dict, library,
                 threshold: float, seed: int):
    _rid, _gloss, seq, hands = files.parse_recording(attempt_doc)
    from .session import attempt_pipeline
    return attempt_pipeline(template, seq, hands, library, threshold,
                            _pipeline_cfg(seed))


@main.command()
@click.argument("template_file", type=click.Path())
@click.argument("attempt_file", type=click.Path())
@click.option("--hands", "hands_file", type=click.Path(), default=None,
              help="Handshape library (.hands.json); defaults to the store's.")
@click.option("--threshold", type=float, default=None,
              help="Gate threshold (default: the template's).")
@click.pass_context
def compare(ctx, template_file, attempt_file, hands_file, threshold):
    """Compare an attempt against a template; JSON result on stdout.

    Exit code 0 = pass, 1 = fail, 2 = error."""
    seed = ctx.obj["seed"]
    try:
        for f in (template_file, attempt_file):
            if not Path(f).exists():
                _error_exit("NotFound", f"no such file: {f}")
        template = files.parse_template(
            json.loads(Path(template_file).read_text(encoding="utf-8")))
        if hands_file:
            library = files.parse_library(
                json.loads(Path(hands_file).read_text(encoding="utf-8")))
        else:
            library = _load_library_from_store(_open_store(ctx))
        attempt_doc = json.loads(Path(attempt_file).read_text(encoding="utf-8"))
        result = _compare_one(template, attempt_doc, library,
                              threshold if threshold is not None else template.threshold_default,
                              seed)
    except (SchemaViolation, json.JSONDecodeError, PoorTracking,
            DegenerateSkeleton, click.ClickException) as e:
        _error_exit(type(e).__name__, str(e))
    click.echo(canonical_json(files.result_to_dict(result)))
    sys.exit(0 if result.passed else 1)


@main.command("run-session")
@click.argument("lesson_file", type=click.Path(exists=True))
@click.argument("attempts_dir", type=click.Path(exists=True))
@click.option("--log", "log_file", type=click.Path(), default=None,
              help="Where to write the .session.jsonl event log.")
@click.pass_context
def run_session(ctx, lesson_file, attempts_dir, log_file):
    """Drive a lesson headlessly from a directory of attempt files."""
    store = _open_store(ctx)
    seed = ctx.obj["seed"]
    try:
        lesson = files.parse_lesson(
            json.loads(Path(lesson_file).read_text(encoding="utf-8")))
        templates = {sid: files.parse_template(store.get("templates", sid))
                     for sid in lesson.sign_ids}
        library = _load_library_from_store(store)
        attempt_files = sorted(Path(attempts_dir).glob("*.sign.json"))
        attempts = []
        for path in attempt_files:
            _rid, _g, seq, hands = files.parse_recording(
                json.loads(path.read_text(encoding="utf-8")))
            attempts.append((seq, hands))
        log, results = drive_lesson(lesson, templates, library, attempts,
                                    _pipeline_cfg(seed))
    except (NotFound, SchemaViolation, PoorTracking, DegenerateSkeleton) as e:
        _error_exit(type(e).__name__, str(e))

    log_path = Path(log_file) if log_file else store.session_log_path(lesson.id)
    with log_path.open("w", encoding="utf-8") as fh:
        for line in log.lines:
            fh.write(canonical_json(line) + "\n")

    replayed = replay_log(log, lesson)
    if replayed != log.phases():
        _error_exit("ReplayMismatch", "log replay diverged from the live run")

    click.echo(f"{'sign':<12} {'attempt':>7} {'accuracy':>9} result")
    sign_attempt = {}
    for r in results:
        sign_attempt[r.template_id] = sign_attempt.get(r.template_id, 0) + 1
        click.echo(f"{r.template_id:<12} {sign_attempt[r.template_id]:>7} "
                   f"{r.accuracy:>8.1f}% {'pass' if r.passed else 'fail'}")
    click.echo(f"log: {log_path}")


@main.command()
@click.argument("template_id")
@click.option("--attempts", "attempts_dir", type=click.Path(exists=True), required=True)
@click.option("--threshold", type=float, default=None)
@click.pass_context
def report(ctx, template_id, attempts_dir, threshold):
    """Batch-compare every attempt in a directory against one template."""
    store = _open_store(ctx)
    seed = ctx.obj["seed"]
    try:
        template = files.parse_template(store.get("templates", template_id))
        library = _load_library_from_store(store)
    except (NotFound, SchemaViolation) as e:
        _error_exit(type(e).__name__, str(e))
    gate_at = threshold if threshold is not None else template.threshold_default
    rows = []
    for path in sorted(Path(attempts_dir).glob("*.sign.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            result = _compare_one(template, doc, library, gate_at, seed)
            rows.append({"attempt": path.name,
                         "accuracy": files.round9(result.accuracy),
                         "movement": files.round9(result.movement_score),
                         "handshape": files.round9(result.handshape_score),
                         "passed": result.passed})
        except (SchemaViolation, PoorTracking, DegenerateSkeleton,
                json.JSONDecodeError) as e:
            rows.append({"attempt": path.name, "error": str(e)})
    click.echo(canonical_json({"template": template_id,
                               "threshold": files.round9(gate_at),
                               "attempts": rows}))


@main.command()
@click.option("--listen", default=None, help="host:port (default 127.0.0.1:8000).")
@click.option("--init-samples", is_flag=True,
              help="Populate the store with the bundled sample data first.")
@click.pass_context
def serve(ctx, listen, init_samples):
    """Run the HTTP API service."""
    import uvicorn
    from .service import create_app
    from .samples import write_sample_store

    root = ctx.obj.get("store")
    if not root:
        raise click.ClickException("no store configured (--store, config, or SIGNCOACH_STORE)")
    if init_samples:
        write_sample_store(root)
    listen = _resolve(listen, ctx.obj["config"], "listen", ENV_LISTEN, "127.0.0.1:8000")
    host, _, port = listen.partition(":")
    app = create_app(root)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


if __name__ == "__main__":
    main()
