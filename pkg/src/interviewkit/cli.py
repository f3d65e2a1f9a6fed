"""Command-line entry points: run, batch, serve, eval."""

from __future__ import annotations

import json
import os
from typing import Optional

import click

from .baselines import StrategyId, make_baseline_session
from .evaluation import EvaluationSuite, write_evaluation_csv
from .events import replay
from .gateway import ENV_API_BASE, Gateway, OpenAIBackend
from .mocks import covering_mock_backend
from .model import UserProfile, load_guide, profile_warnings
from .orchestrator import PlannerConfig, SessionConfig, SessionOrchestrator
from .simulator import make_responder

DEFAULT_GUIDE = os.path.join(os.path.dirname(__file__), "..", "..", "data", "guides", "workforce_ai.json")

ALL_SYSTEMS = "sparkme,roleplay,interviewgpt,mimitalk"


def build_gateway(live: bool) -> Gateway:
    if live:
        if not os.getenv(ENV_API_BASE):
            raise click.UsageError(f"--live requires {ENV_API_BASE} to be set")
        return Gateway(OpenAIBackend())
    return Gateway(covering_mock_backend())


def load_profile(path: str) -> UserProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return UserProfile.from_dict(json.load(fh))


def _run_session(session, responder, echo: bool = False) -> None:
    message = session.start()
    if echo:
        click.echo(f"[interviewer] {message}")
    ended = getattr(session, "ended", False) or getattr(session, "phase", None) == "ended"
    while not ended:
        reply = responder.respond(session.transcript, message)
        if echo:
            click.echo(f"[interviewee] {reply}")
        result = session.submit_response(reply)
        message = result["message"]
        ended = result["ended"]
        if echo:
            click.echo(f"[interviewer] {message}")


@click.group()
def main() -> None:
    """Adaptive semi-structured interviewing toolkit."""


@main.command()
@click.option("--guide", "guide_path", default=DEFAULT_GUIDE, show_default=True)
@click.option("--profile", "profile_path", required=True, help="Interviewee profile JSON.")
@click.option(
    "--strategy",
    type=click.Choice([s.value for s in StrategyId]),
    default=StrategyId.SPARKME.value,
    show_default=True,
)
@click.option("--turn-cap", default=72, show_default=True)
@click.option("--planner-period", default=2, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--live", is_flag=True, help="Use the remote model backend instead of the mock.")
@click.option("--out", "out_dir", default=None, help="Directory for session artifacts.")
@click.option("--echo/--no-echo", default=True, show_default=True)
def run(
    guide_path: str,
    profile_path: str,
    strategy: str,
    turn_cap: int,
    planner_period: int,
    seed: Optional[int],
    live: bool,
    out_dir: Optional[str],
    echo: bool,
) -> None:
    """Run one interview session against a simulated interviewee."""
    guide = load_guide(guide_path)
    profile = load_profile(profile_path)
    for warning in profile_warnings(profile, guide):
        click.echo(f"warning: {warning}", err=True)
    gateway = build_gateway(live)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    log_path = os.path.join(out_dir, "events.jsonl") if out_dir else None

    strategy_id = StrategyId(strategy)
    if strategy_id == StrategyId.SPARKME:
        config = SessionConfig(
            turn_cap=turn_cap,
            planner=PlannerConfig(period=planner_period),
            seed=seed,
            log_path=log_path,
        )
        session = SessionOrchestrator(guide, gateway, config)
    else:
        session = make_baseline_session(strategy_id, guide, gateway, turn_cap=turn_cap)

    responder = make_responder(profile, gateway if live else None, scripted=not live)
    _run_session(session, responder, echo=echo)

    completed = len(session.transcript.completed_turns())
    click.echo(f"session ended after {completed} turns")
    if out_dir:
        with open(os.path.join(out_dir, "transcript.json"), "w", encoding="utf-8") as fh:
            json.dump(session.transcript.to_dict(), fh, indent=2)
        with open(os.path.join(out_dir, "agenda.json"), "w", encoding="utf-8") as fh:
            json.dump(session.agenda.to_dict(), fh, indent=2)
        if isinstance(session, SessionOrchestrator):
            session.write_utility_series(os.path.join(out_dir, "utility_series.csv"))
        click.echo(f"artifacts written to {out_dir}")


@main.command()
@click.option("--guide", "guide_path", default=DEFAULT_GUIDE, show_default=True)
@click.option("--profiles", "profiles_dir", required=True, help="Directory of profile JSON files.")
@click.option("--systems", default=ALL_SYSTEMS, show_default=True)
@click.option("--turn-cap", default=72, show_default=True)
@click.option("--live", is_flag=True)
@click.option("--out", "out_dir", required=True)
def batch(
    guide_path: str,
    profiles_dir: str,
    systems: str,
    turn_cap: int,
    live: bool,
    out_dir: str,
) -> None:
    """Run every requested strategy against every profile and evaluate."""
    guide = load_guide(guide_path)
    gateway = build_gateway(live)
    strategies = [StrategyId(s.strip()) for s in systems.split(",") if s.strip()]
    profiles = sorted(
        f for f in os.listdir(profiles_dir) if f.endswith(".json")
    )
    os.makedirs(out_dir, exist_ok=True)
    suite = EvaluationSuite(gateway)
    evaluations = {}
    for profile_file in profiles:
        profile = load_profile(os.path.join(profiles_dir, profile_file))
        for strategy_id in strategies:
            name = f"{profile.profile_id}-{strategy_id.value}"
            if strategy_id == StrategyId.SPARKME:
                session = SessionOrchestrator(
                    guide, gateway, SessionConfig(turn_cap=turn_cap)
                )
            else:
                session = make_baseline_session(strategy_id, guide, gateway, turn_cap=turn_cap)
            responder = make_responder(profile, gateway if live else None, scripted=not live)
            _run_session(session, responder)
            evaluation = suite.evaluate_session(
                session.agenda, session.transcript, profile, guide
            )
            evaluations[name] = evaluation
            with open(os.path.join(out_dir, f"{name}.json"), "w", encoding="utf-8") as fh:
                json.dump(evaluation.to_dict(), fh, indent=2)
            click.echo(
                f"{name}: turns={evaluation.num_turns} "
                f"coverage={evaluation.coverage_mean} "
                f"utility={evaluation.utility_breakdown.total:.4f}"
            )
    write_evaluation_csv(evaluations, os.path.join(out_dir, "summary.csv"))
    click.echo(f"summary written to {os.path.join(out_dir, 'summary.csv')}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Start the HTTP API service."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=host, port=port)


@main.command("eval")
@click.option("--guide", "guide_path", default=DEFAULT_GUIDE, show_default=True)
@click.option("--profile", "profile_path", required=True)
@click.option("--log", "log_path", required=True, help="Session events.jsonl to evaluate.")
@click.option("--live", is_flag=True)
@click.option("--out", "out_path", default=None, help="Write the evaluation JSON here.")
def evaluate(
    guide_path: str, profile_path: str, log_path: str, live: bool, out_path: Optional[str]
) -> None:
    """Evaluate a recorded session from its event log."""
    from .events import read_log

    guide = load_guide(guide_path)
    profile = load_profile(profile_path)
    agenda, transcript, _ = replay(guide, read_log(log_path))
    suite = EvaluationSuite(build_gateway(live))
    evaluation = suite.evaluate_session(agenda, transcript, profile, guide)
    payload = json.dumps(evaluation.to_dict(), indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
        click.echo(f"evaluation written to {out_path}")
    else:
        click.echo(payload)


if __name__ == "__main__":
    main()
