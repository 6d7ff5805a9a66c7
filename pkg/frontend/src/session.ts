/** The session view model: drives the practice loop over the HTTP API.
 *
 * Every phase, score, and feedback geometry shown comes from an API
 * response; the client computes nothing locally.  Requests for one session
 * are queued so at most one event is in flight at a time. */

import {
  ApiErrorDto,
  ComparisonResultDto,
  FEEDBACK_MODES,
  FeedbackMode,
  SessionStateDto,
  THRESHOLD_PRESETS,
} from "./types.js";

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(public readonly status: number, public readonly body: ApiErrorDto) {
    super(body.message);
  }
}

export interface SessionEventDoc {
  type: string;
  [key: string]: unknown;
}

export class SessionClient {
  private sessionId: string | null = null;
  private lastState: SessionStateDto | null = null;
  private readonly results: ComparisonResultDto[] = [];
  private queue: Promise<unknown> = Promise.resolve();
  private networkError: string | null = null;

  /** Selectors the page binds to; fixed option lists by contract. */
  readonly thresholdOptions = THRESHOLD_PRESETS;
  readonly feedbackModeOptions = FEEDBACK_MODES;
  selectedMode: FeedbackMode = "recast";

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (resp.status >= 400) {
      throw new ApiError(resp.status, payload as ApiErrorDto);
    }
    return payload as T;
  }

  /** Serialize calls: the service locks per session, the client queues. */
  private enqueue<T>(job: () => Promise<T>): Promise<T> {
    const next = this.queue.then(job, job);
    this.queue = next.catch(() => undefined);
    return next;
  }

  get id(): string | null {
    return this.sessionId;
  }

  get state(): SessionStateDto | null {
    return this.lastState;
  }

  get phase(): string {
    return this.lastState?.phase ?? "idle";
  }

  /** The recording icon is shown exactly while the service says we record. */
  get recordingIndicatorVisible(): boolean {
    return this.phase === "recording";
  }

  get countdownMs(): number | null {
    return this.phase === "countdown" ? this.lastState?.remaining_ms ?? null : null;
  }

  get lastNetworkError(): string | null {
    return this.networkError;
  }

  async start(lessonId: string): Promise<SessionStateDto> {
    return this.enqueue(async () => {
      const doc = await this.request<{ session_id: string; state: SessionStateDto }>(
        "POST", "/api/sessions", { lesson_id: lessonId });
      this.sessionId = doc.session_id;
      this.lastState = doc.state;
      return doc.state;
    });
  }

  async sendEvent(event: SessionEventDoc): Promise<SessionStateDto> {
    return this.enqueue(async () => {
      if (!this.sessionId) throw new Error("no session started");
      try {
        const doc = await this.request<{ state: SessionStateDto }>(
          "POST", `/api/sessions/${this.sessionId}/events`, { event });
        this.lastState = doc.state;
        this.networkError = null;
        return doc.state;
      } catch (err) {
        if (!(err instanceof ApiError)) {
          // network failure: keep the session id so the user can retry
          this.networkError = err instanceof Error ? err.message : String(err);
        }
        throw err;
      }
    });
  }

  async fetchResult(n: number): Promise<ComparisonResultDto> {
    return this.enqueue(async () => {
      if (!this.sessionId) throw new Error("no session started");
      const doc = await this.request<ComparisonResultDto>(
        "GET", `/api/sessions/${this.sessionId}/result/${n}`);
      this.results[n] = doc;
      return doc;
    });
  }

  async fetchFeedback(n: number, mode?: FeedbackMode): Promise<unknown> {
    return this.enqueue(async () => {
      if (!this.sessionId) throw new Error("no session started");
      const query = mode ? `?mode=${mode}` : "";
      return this.request<unknown>(
        "GET", `/api/feedback/${this.sessionId}/${n}${query}`);
    });
  }

  resultAt(n: number): ComparisonResultDto | undefined {
    return this.results[n];
  }
}

export interface ResultScreen {
  accuracyText: string;
  movementText: string;
  handshapeText: string;
  verdictText: string;
  thresholdText: string;
}

/** Format the result screen strictly from the API payload — the only data
 * path from numbers to the DOM, so interception tests can prove no score is
 * computed locally. */
export function renderResultScreen(result: ComparisonResultDto): ResultScreen {
  return {
    accuracyText: `${result.accuracy}`,
    movementText: `${result.movement_score}`,
    handshapeText: `${result.handshape_score}`,
    verdictText: result.passed ? "pass" : "fail",
    thresholdText: `${result.threshold_used}`,
  };
}
