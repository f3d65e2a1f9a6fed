#!/usr/bin/env python3
"""Run every interviewing strategy against every shipped profile, offline.

Uses the deterministic mock model backends, so the study is reproducible and
needs no credentials. Writes per-session artifacts and a summary CSV.

Usage:
    python3 scripts/run_mock_study.py --out results/
"""

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from interviewkit.baselines import StrategyId, make_baseline_session
from interviewkit.evaluation import EvaluationSuite, write_evaluation_csv
from interviewkit.gateway import Gateway
from interviewkit.mocks import covering_mock_backend
from interviewkit.model import UserProfile, load_guide
from interviewkit.orchestrator import Phase, SessionConfig, SessionOrchestrator
from interviewkit.simulator import ScriptedProfileResponder

ROOT = os.path.join(os.path.dirname(__file__), "..")


def run_session(session, responder):
    message = session.start()
    while True:
        ended = getattr(session, "ended", False) or getattr(session, "phase", None) == Phase.ENDED
        if ended:
            break
        result = session.submit_response(responder.respond(session.transcript, message))
        message = result["message"]
        if result["ended"]:
            break


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument(
        "--guide", default=os.path.join(ROOT, "data", "guides", "workforce_ai.json")
    )
    parser.add_argument("--profiles", default=os.path.join(ROOT, "data", "profiles"))
    parser.add_argument("--turn-cap", type=int, default=72)
    args = parser.parse_args()

    guide = load_guide(args.guide)
    os.makedirs(args.out, exist_ok=True)
    gateway = Gateway(covering_mock_backend())
    suite = EvaluationSuite(gateway)
    evaluations = {}

    for filename in sorted(os.listdir(args.profiles)):
        if not filename.endswith(".json"):
            continue
        with open(os.path.join(args.profiles, filename), "r", encoding="utf-8") as fh:
            profile = UserProfile.from_dict(json.load(fh))
        for strategy in StrategyId:
            name = f"{profile.profile_id}-{strategy.value}"
            if strategy == StrategyId.SPARKME:
                session = SessionOrchestrator(
                    guide, gateway, SessionConfig(turn_cap=args.turn_cap)
                )
            else:
                session = make_baseline_session(
                    strategy, guide, gateway, turn_cap=args.turn_cap
                )
            run_session(session, ScriptedProfileResponder(profile))
            evaluation = suite.evaluate_session(
                session.agenda, session.transcript, profile, guide
            )
            evaluations[name] = evaluation
            with open(os.path.join(args.out, f"{name}.json"), "w", encoding="utf-8") as fh:
                json.dump(evaluation.to_dict(), fh, indent=2)
            if isinstance(session, SessionOrchestrator):
                session.write_utility_series(
                    os.path.join(args.out, f"{name}-utility.csv")
                )
            print(
                f"{name}: turns={evaluation.num_turns} "
                f"coverage={evaluation.coverage_mean} "
                f"utility={evaluation.utility_breakdown.total:.4f}"
            )

    summary = os.path.join(args.out, "summary.csv")
    write_evaluation_csv(evaluations, summary)
    print(f"\nsummary written to {summary}")


if __name__ == "__main__":
    main()
