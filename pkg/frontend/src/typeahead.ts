import {
  ServiceError,
  SuggestClient,
  SuggestItem,
  SuggestResponse,
} from "./client.js";
import { Debounced, debounce } from "./debounce.js";

/** One rendered suggestion list and what became of it.
 *
 * `outcome` is undefined while the list is live, a position once the user
 * clicked, and null when they dismissed or submitted their own text. It is
 * set at most once; lists replaced by further typing keep outcome undefined
 * and their ticket is left to the service's expiry policy.
 */
export interface UiEpisode {
  token: string;
  prefix: string;
  items: SuggestItem[];
  outcome?: number | null;
  latencyMs: number;
}

export interface TypeaheadOptions {
  user?: string;
  debounceMs?: number;
  /** Called after the service confirms the feedback for an episode. */
  onEpisode?: (episode: UiEpisode) => void;
}

const DEFAULT_DEBOUNCE_MS = 150;

function describeError(err: unknown): string {
  if (err instanceof ServiceError) return err.message;
  if (err instanceof Error) return `service unreachable (${err.message})`;
  return "service unreachable";
}

/** Suggestion dropdown wired to an input element.
 *
 * Renders item texts only; which engine produced a suggestion is deliberately
 * not shown (it would bias clicks) and lives only in `episode.items`.
 */
export class Typeahead {
  episode: UiEpisode | null = null;

  private seq = 0;
  private inflight: AbortController | null = null;
  private ordered: SuggestItem[] = [];
  private highlighted = -1;
  private visible = false;
  private readonly requestSuggest: Debounced<[string]>;

  constructor(
    readonly input: HTMLInputElement,
    readonly list: HTMLElement,
    readonly banner: HTMLElement,
    readonly client: SuggestClient,
    readonly options: TypeaheadOptions = {},
  ) {
    this.requestSuggest = debounce(
      (prefix: string) => void this.fetchList(prefix),
      options.debounceMs ?? DEFAULT_DEBOUNCE_MS,
    );
    this.hideBanner();
    this.clearList();
    input.addEventListener("input", () => this.onInput());
    input.addEventListener("keydown", (ev) => this.onKeydown(ev as KeyboardEvent));
  }

  private onInput(): void {
    const prefix = this.input.value;
    if (prefix === "") {
      // Mid-edit, not a terminal gesture: drop the pending request and let
      // the service expire whatever list was on screen.
      this.requestSuggest.cancel();
      this.clearList();
      return;
    }
    this.requestSuggest(prefix);
  }

  private onKeydown(ev: KeyboardEvent): void {
    if (ev.key === "Escape") {
      if (this.visible) {
        ev.preventDefault();
        void this.resolve(null);
      }
      return;
    }
    if (ev.key === "Enter") {
      if (!this.visible) return;
      ev.preventDefault();
      if (this.highlighted >= 0 && this.highlighted < this.ordered.length) {
        void this.choose(this.ordered[this.highlighted]);
      } else {
        // free-text submit: the typed query was used as-is
        void this.resolve(null);
      }
      return;
    }
    if (ev.key === "ArrowDown" || ev.key === "ArrowUp") {
      if (!this.visible) return;
      ev.preventDefault();
      const n = this.ordered.length;
      // cycle through -1 (no highlight), 0, ..., n-1
      if (ev.key === "ArrowDown") {
        this.highlighted = this.highlighted + 1 >= n ? -1 : this.highlighted + 1;
      } else {
        this.highlighted = this.highlighted - 1 < -1 ? n - 1 : this.highlighted - 1;
      }
      this.renderHighlight();
    }
  }

  private async fetchList(prefix: string): Promise<void> {
    const mySeq = ++this.seq;
    // at most one in-flight suggest: abort the previous request outright
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const started = Date.now();
    let resp: SuggestResponse;
    try {
      resp = await this.client.suggest(prefix, this.options.user, controller.signal);
    } catch (err) {
      if (this.inflight === controller) this.inflight = null;
      if (controller.signal.aborted) return; // superseded, not a failure
      if (mySeq === this.seq) this.showBanner(describeError(err));
      return;
    }
    if (this.inflight === controller) this.inflight = null;
    if (mySeq !== this.seq) return; // a newer request won; drop this list
    this.hideBanner();
    // The replaced episode (if any) gets no feedback; its ticket expires
    // server-side.
    this.episode = {
      token: resp.token,
      prefix: resp.prefix,
      items: resp.items,
      latencyMs: Date.now() - started,
    };
    this.render(resp.items);
  }

  private render(items: SuggestItem[]): void {
    this.list.innerHTML = "";
    this.highlighted = -1;
    this.ordered = [...items].sort((a, b) => a.position - b.position);
    for (const item of this.ordered) {
      const li = this.list.ownerDocument.createElement("li");
      li.textContent = item.text; // text only; provenance stays hidden here
      li.dataset.position = String(item.position);
      li.addEventListener("click", () => void this.choose(item));
      this.list.appendChild(li);
    }
    this.visible = this.ordered.length > 0;
    this.list.style.display = this.visible ? "" : "none";
  }

  private renderHighlight(): void {
    const children = Array.from(this.list.children);
    children.forEach((el, i) => {
      el.classList.toggle("highlighted", i === this.highlighted);
    });
  }

  private clearList(): void {
    this.list.innerHTML = "";
    this.list.style.display = "none";
    this.ordered = [];
    this.visible = false;
    this.highlighted = -1;
  }

  private async choose(item: SuggestItem): Promise<void> {
    this.input.value = item.text;
    await this.resolve(item.position);
  }

  private async resolve(outcome: number | null): Promise<void> {
    const ep = this.episode;
    if (!ep || ep.outcome !== undefined) return; // one outcome per token
    ep.outcome = outcome; // marked before the await so a double click cannot resend
    this.clearList();
    try {
      await this.client.feedback(ep.token, outcome);
    } catch (err) {
      this.showBanner(describeError(err));
      return;
    }
    this.hideBanner();
    this.options.onEpisode?.(ep);
  }

  private showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.style.display = "";
  }

  private hideBanner(): void {
    this.banner.textContent = "";
    this.banner.style.display = "none";
  }
}
