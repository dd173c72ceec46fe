/** Typed access to the suggest service HTTP API.
 *
 * The shapes here mirror the JSON the service emits verbatim; nothing is
 * derived client-side. `mean` in particular is displayed as received, never
 * recomputed from alpha/beta.
 */

export interface SuggestItem {
  position: number;
  engine: string;
  rank: number;
  text: string;
}

export interface SuggestResponse {
  token: string;
  prefix: string;
  items: SuggestItem[];
}

export interface FeedbackResponse {
  token: string;
  applied: boolean;
  position: number | null;
}

export interface StatsAction {
  engine: string;
  rank: number | null;
  alpha: number;
  beta: number;
  mean: number;
  pulls: number;
}

export interface StatsBandit {
  // null when the strategy shares one bandit across all positions
  position: number | null;
  actions: StatsAction[];
}

export interface StatsResponse {
  strategy: string;
  display_size: number;
  engines: string[];
  served: number;
  clicks: number;
  no_clicks: number;
  expired: number;
  open_tickets: number;
  ttl_seconds: number;
  expire_updates: boolean;
  bandits: StatsBandit[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export class SuggestClient {
  readonly baseUrl: string;
  private readonly doFetch: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // bind lazily so tests can swap globalThis.fetch after construction
    this.doFetch = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async suggest(
    prefix: string,
    user?: string,
    signal?: AbortSignal,
  ): Promise<SuggestResponse> {
    const params = new URLSearchParams({ prefix });
    if (user !== undefined && user !== "") params.set("user", user);
    const resp = await this.doFetch(`${this.baseUrl}/suggest?${params}`, {
      signal,
    });
    return this.unwrap<SuggestResponse>(resp);
  }

  async feedback(
    token: string,
    position: number | null,
  ): Promise<FeedbackResponse> {
    const resp = await this.doFetch(`${this.baseUrl}/feedback`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ token, position }),
    });
    return this.unwrap<FeedbackResponse>(resp);
  }

  async stats(): Promise<StatsResponse> {
    const resp = await this.doFetch(`${this.baseUrl}/stats`);
    return this.unwrap<StatsResponse>(resp);
  }

  async snapshot(): Promise<unknown> {
    const resp = await this.doFetch(`${this.baseUrl}/admin/snapshot`, {
      method: "POST",
    });
    return this.unwrap<unknown>(resp);
  }

  async restore(doc: unknown): Promise<void> {
    const resp = await this.doFetch(`${this.baseUrl}/admin/restore`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    await this.unwrap<unknown>(resp);
  }

  private async unwrap<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let detail = "";
      try {
        const body = await resp.json();
        detail = typeof body?.detail === "string" ? body.detail : JSON.stringify(body);
      } catch {
        detail = resp.statusText;
      }
      throw new ServiceError(resp.status, `HTTP ${resp.status}: ${detail}`);
    }
    return (await resp.json()) as T;
  }
}
