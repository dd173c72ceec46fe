import { StatsAction, StatsResponse, SuggestClient } from "./client.js";
import { UiEpisode } from "./typeahead.js";

export interface DashboardOptions {
  /** Polling interval; 0 disables the timer (manual refresh only). */
  pollMs?: number;
  /** Rows kept in the episode log. */
  logLimit?: number;
}

const DEFAULT_POLL_MS = 5000;
const DEFAULT_LOG_LIMIT = 50;

function rowLabel(action: StatsAction): string {
  return action.rank === null ? action.engine : `${action.engine} #${action.rank}`;
}

function formatMean(mean: number): string {
  return mean.toFixed(3);
}

function formatCtr(clicks: number, served: number): string {
  if (served === 0) return "–";
  return `${((100 * clicks) / served).toFixed(1)}%`;
}

/** Posterior heatmap plus running counters, read from GET /stats verbatim.
 *
 * Columns are the service's bandits (one per position, or a single shared
 * column when `position` is null); rows are action labels, `engine` alone or
 * `engine #rank` when the strategy scores explicit ranks. Cell values show
 * the `mean` field as received; nothing is recomputed from alpha/beta.
 */
export class Dashboard {
  lastStats: StatsResponse | null = null;
  stale = false;

  private timer: ReturnType<typeof setInterval> | null = null;
  private readonly counters: HTMLElement;
  private readonly staleNote: HTMLElement;
  private readonly heatmap: HTMLElement;
  private readonly log: HTMLElement;

  constructor(
    readonly root: HTMLElement,
    readonly client: SuggestClient,
    readonly options: DashboardOptions = {},
  ) {
    const doc = root.ownerDocument;
    this.counters = doc.createElement("div");
    this.counters.className = "counters";
    this.staleNote = doc.createElement("div");
    this.staleNote.className = "stale-note";
    this.staleNote.style.display = "none";
    this.heatmap = doc.createElement("div");
    this.heatmap.className = "heatmap";
    this.log = doc.createElement("ul");
    this.log.className = "episode-log";
    root.appendChild(this.staleNote);
    root.appendChild(this.counters);
    root.appendChild(this.heatmap);
    root.appendChild(this.log);
  }

  async refresh(): Promise<void> {
    try {
      this.lastStats = await this.client.stats();
      this.stale = false;
    } catch {
      // keep showing the last known numbers, flagged as stale
      this.stale = true;
    }
    this.render();
  }

  start(): void {
    const pollMs = this.options.pollMs ?? DEFAULT_POLL_MS;
    void this.refresh();
    if (pollMs > 0 && this.timer === null) {
      this.timer = setInterval(() => void this.refresh(), pollMs);
    }
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** Prepend a finished episode to the on-page log (newest first). */
  logEpisode(episode: UiEpisode): void {
    const doc = this.root.ownerDocument;
    const li = doc.createElement("li");
    const outcome =
      episode.outcome === null || episode.outcome === undefined
        ? "abandoned"
        : `clicked #${episode.outcome}`;
    li.textContent = `"${episode.prefix}" → ${outcome} (${episode.items.length} shown, ${Math.round(episode.latencyMs)} ms)`;
    this.log.insertBefore(li, this.log.firstChild);
    const limit = this.options.logLimit ?? DEFAULT_LOG_LIMIT;
    while (this.log.children.length > limit) {
      this.log.removeChild(this.log.lastChild as Node);
    }
  }

  private render(): void {
    this.staleNote.textContent = this.stale
      ? "stats unavailable – showing last known values"
      : "";
    this.staleNote.style.display = this.stale ? "" : "none";
    const stats = this.lastStats;
    if (!stats) {
      this.counters.textContent = "no data yet";
      return;
    }
    this.renderCounters(stats);
    this.renderHeatmap(stats);
  }

  private renderCounters(stats: StatsResponse): void {
    const doc = this.root.ownerDocument;
    this.counters.innerHTML = "";
    const fields: [string, string][] = [
      ["strategy", stats.strategy],
      ["engines", stats.engines.join(", ")],
      ["served", String(stats.served)],
      ["clicks", String(stats.clicks)],
      ["no clicks", String(stats.no_clicks)],
      ["expired", String(stats.expired)],
      ["open tickets", String(stats.open_tickets)],
      ["CTR", formatCtr(stats.clicks, stats.served)],
    ];
    for (const [label, value] of fields) {
      const span = doc.createElement("span");
      span.className = "counter";
      span.dataset.field = label.replace(" ", "-");
      span.textContent = `${label}: ${value}`;
      this.counters.appendChild(span);
    }
  }

  private renderHeatmap(stats: StatsResponse): void {
    const doc = this.root.ownerDocument;
    this.heatmap.innerHTML = "";

    // union of row labels across bandits; lazy strategies materialize
    // actions as they are first shown, so bandits can disagree
    const labels = new Map<string, { engine: string; rank: number | null }>();
    for (const bandit of stats.bandits) {
      for (const action of bandit.actions) {
        labels.set(rowLabel(action), { engine: action.engine, rank: action.rank });
      }
    }
    const rows = [...labels.keys()].sort((a, b) => {
      const ka = labels.get(a)!;
      const kb = labels.get(b)!;
      if (ka.engine !== kb.engine) return ka.engine < kb.engine ? -1 : 1;
      return (ka.rank ?? 0) - (kb.rank ?? 0);
    });

    const table = doc.createElement("table");
    const head = doc.createElement("tr");
    head.appendChild(doc.createElement("th"));
    for (const bandit of stats.bandits) {
      const th = doc.createElement("th");
      th.textContent =
        bandit.position === null ? "all positions" : `position ${bandit.position}`;
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const label of rows) {
      const tr = doc.createElement("tr");
      const th = doc.createElement("th");
      th.textContent = label;
      tr.appendChild(th);
      for (const bandit of stats.bandits) {
        const td = doc.createElement("td");
        td.dataset.row = label;
        td.dataset.column =
          bandit.position === null ? "all" : String(bandit.position);
        const action = bandit.actions.find((a) => rowLabel(a) === label);
        if (action === undefined) {
          td.textContent = "–"; // not materialized yet
          td.className = "cell empty";
        } else {
          td.textContent = formatMean(action.mean);
          td.className = "cell";
          td.title = `alpha=${action.alpha} beta=${action.beta} pulls=${action.pulls}`;
          td.style.backgroundColor = `rgba(37, 99, 235, ${(0.85 * action.mean).toFixed(3)})`;
        }
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    this.heatmap.appendChild(table);
  }
}
