"""Command line entry points: serve the API, run benchmarks, drive a demo
session against a live server, and generate the synthetic rating corpus."""

from __future__ import annotations

import sys

import click

from storerec import bench as bench_mod
from storerec import datagen
from storerec.config import load_config


@click.group()
def main():
    """Position-aware shopping recommender service and benchmark harness."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML config file; STOREREC_* env vars override.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_path, host, port):
    """Run the HTTP service."""
    import uvicorn

    from storerec.api import create_app

    cfg = load_config(config_path)
    if host:
        cfg.host = host
    if port:
        cfg.port = port
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port)


@main.command("gen-data")
@click.option("--out", required=True, type=click.Path(), help="Ratings file to write.")
@click.option("--seed", type=int, default=0)
def gen_data(out, seed):
    """Write the deterministic synthetic rating corpus (UserID::MovieID::Rating::Timestamp)."""
    count = datagen.write_ratings_file(out, seed=seed)
    click.echo(f"wrote {count} ratings to {out}")


def _dataset(data, seed):
    try:
        return bench_mod.load_dataset(data, seed)
    except FileNotFoundError:
        raise click.ClickException(
            f"dataset not found: {data}. Provide a MovieLens-format ratings file "
            "(UserID::MovieID::Rating::Timestamp), or run 'storerec gen-data' to "
            "create the synthetic corpus, or omit --data to generate it in memory.")


def _finish(report, report_out):
    click.echo(report.render_text())
    if report_out:
        with open(report_out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        click.echo(f"report written to {report_out}")
    if not report.all_passed:
        sys.exit(1)


@main.command("bench-query")
@click.option("--data", type=click.Path(), default=None,
              help="Ratings file; omitted = synthetic corpus.")
@click.option("--min-support", "min_supports", type=float, multiple=True,
              default=(0.7, 0.15), show_default=True)
@click.option("--top-n", type=int, default=5, show_default=True)
@click.option("--probes", type=int, default=1000, show_default=True)
@click.option("--repetitions", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report-out", type=click.Path(), default=None)
def bench_query(data, min_supports, top_n, probes, repetitions, seed, report_out):
    """Per-recommendation latency for Apriori, ICF, UCF, and ICF-STR."""
    ratings, descriptor = _dataset(data, seed)
    report = bench_mod.bench_query_speed(
        ratings, repetitions=repetitions, probes=probes, top_n=top_n,
        min_supports=min_supports, seed=seed, dataset=descriptor)
    _finish(report, report_out)


@main.command("bench-build")
@click.option("--data", type=click.Path(), default=None)
@click.option("--repetitions", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report-out", type=click.Path(), default=None)
def bench_build(data, repetitions, seed, report_out):
    """Model build times for the item and user similarity models."""
    ratings, descriptor = _dataset(data, seed)
    report = bench_mod.bench_build_speed(ratings, repetitions=repetitions,
                                         dataset=descriptor)
    _finish(report, report_out)


@main.command("bench-coldstart")
@click.option("--top-n", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report-out", type=click.Path(), default=None)
def bench_coldstart(top_n, seed, report_out):
    """The two cold-start scenarios as a per-algorithm result grid."""
    report = bench_mod.bench_cold_start(top_n=top_n, seed=seed)
    _finish(report, report_out)


@main.command()
@click.option("--base-url", default="http://127.0.0.1:8000", show_default=True)
@click.option("--user", "user_id", default="demo-user", show_default=True)
def demo(base_url, user_id):
    """Scripted walkthrough against a running server: dwell at a shelf,
    buy an item, accept one recommendation, check out."""
    import httpx

    client = httpx.Client(base_url=base_url, timeout=10.0)

    def call(method, path, **kwargs):
        response = client.request(method, path, **kwargs)
        if response.status_code >= 400:
            raise click.ClickException(f"{method} {path} -> {response.status_code}: {response.text}")
        return response.json()

    layout = call("GET", "/v1/layout")
    shelf = layout["shelves"][0]
    cx = (shelf["zone_min"][0] + shelf["zone_max"][0]) / 2
    cy = (shelf["zone_min"][1] + shelf["zone_max"][1]) / 2

    session = call("POST", "/v1/sessions", json={"user_id": user_id})
    sid = session["session_id"]
    click.echo(f"session {sid} for {user_id}")

    for step in range(13):
        pos = call("POST", f"/v1/sessions/{sid}/position",
                   json={"x": cx, "y": cy, "t": float(step)})
    click.echo(f"dwelled {pos['dwell_seconds']:.1f}s at {pos['current_shelf']}")
    pos = call("POST", f"/v1/sessions/{sid}/position",
               json={"x": shelf["zone_max"][0] + 1.0, "y": cy, "t": 13.0})
    click.echo(f"qualifying shelf: {pos['last_qualifying_shelf']}")

    other_item = next(i for s in layout["shelves"][1:] for i in s["items"])
    call("POST", f"/v1/sessions/{sid}/pickup", json={"item_id": other_item})
    decision = call("POST", f"/v1/sessions/{sid}/decision",
                    json={"item_id": other_item, "bought": True})
    panel = decision["panel"]
    click.echo(f"bought {other_item}; panel {panel['rec_id']} recommends "
               + ", ".join(it["item_id"] for page in panel["pages"] for it in page))

    first = panel["pages"][0][0]["item_id"]
    call("POST", f"/v1/sessions/{sid}/panels/{panel['rec_id']}/purchase",
         json={"item_id": first})
    call("POST", f"/v1/sessions/{sid}/panels/{panel['rec_id']}/dismiss")
    receipt = call("POST", f"/v1/sessions/{sid}/checkout")
    click.echo(f"receipt cart: {receipt['cart']}")
    click.echo("deltas: " + ", ".join(f"{d['item_id']}:{d['delta']:+.1f}" for d in receipt["deltas"]))


if __name__ == "__main__":
    main()
