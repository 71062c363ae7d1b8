import { afterEach, describe, expect, it, vi } from "vitest";

import { Api, ApiError } from "./api";

function mockFetch(status: number, body: unknown) {
  const fn = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    statusText: `status ${status}`,
    json: async () => body,
  }));
  globalThis.fetch = fn as unknown as typeof fetch;
  return fn;
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("Api", () => {
  it("shapes atlas query urls", async () => {
    const fn = mockFetch(200, { topology: "rect", max_width: 2, max_length: 3, cells: [] });
    await new Api("http://x").atlas("torus", 4, 13);
    expect(fn).toHaveBeenCalledWith(
      "http://x/atlas?topology=torus&max_width=4&max_length=13",
      undefined,
    );
  });

  it("posts session moves as JSON", async () => {
    const fn = mockFetch(200, { id: "s", moves: [] });
    await new Api().move("s", "V", [
      [0, 0],
      [1, 0],
    ]);
    const [url, init] = fn.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/sessions/s/moves");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({
      player: "V",
      cells: [
        [0, 0],
        [1, 0],
      ],
    });
  });

  it("raises ApiError with the server detail", async () => {
    mockFetch(422, { detail: "unsupported width" });
    await expect(new Api().createSession(6, 100, "H")).rejects.toMatchObject({
      status: 422,
      message: "unsupported width",
    });
    mockFetch(409, { detail: "not your turn" });
    try {
      await new Api().engineMove("s");
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
    }
  });
});
