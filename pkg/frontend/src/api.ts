import type { AtlasResponse, Cell, PlayerToken, SessionRecord, TraceNode } from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* plain-text error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class Api {
  constructor(readonly base: string = "") {}

  private url(path: string, params?: Record<string, string | number>): string {
    const query = params
      ? "?" +
        Object.entries(params)
          .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
          .join("&")
      : "";
    return `${this.base}${path}${query}`;
  }

  health(): Promise<{ status: string }> {
    return request(this.url("/health"));
  }

  atlas(topology: string, maxWidth: number, maxLength: number): Promise<AtlasResponse> {
    return request(
      this.url("/atlas", {
        topology,
        max_width: maxWidth,
        max_length: maxLength,
      }),
    );
  }

  derivation(topology: string, width: number, length: number): Promise<TraceNode> {
    return request(this.url("/derivation", { topology, width, length }));
  }

  createSession(
    width: number,
    length: number,
    engineSide: PlayerToken | "auto" | null,
    topology = "rect",
  ): Promise<SessionRecord> {
    return request(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ topology, width, length, engine_side: engineSide }),
    });
  }

  session(id: string): Promise<SessionRecord> {
    return request(this.url(`/sessions/${id}`));
  }

  move(id: string, player: PlayerToken, cells: [Cell, Cell]): Promise<SessionRecord> {
    return request(this.url(`/sessions/${id}/moves`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ player, cells }),
    });
  }

  engineMove(id: string): Promise<SessionRecord> {
    return request(this.url(`/sessions/${id}/engine-move`), { method: "POST" });
  }
}
