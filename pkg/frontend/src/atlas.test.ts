import { describe, expect, it } from "vitest";

import { AtlasViewModel, describeSupport, traceLines } from "./atlas";
import type { AtlasCell, AtlasResponse, TraceNode } from "./types";

function cell(partial: Partial<AtlasCell>): AtlasCell {
  return {
    topology: "rect",
    width: 1,
    length: 1,
    outcomes: ["H"],
    token: "H",
    provenance: "derived",
    known: true,
    ...partial,
  };
}

const FIXTURE: AtlasResponse = {
  topology: "rect",
  max_width: 4,
  max_length: 22,
  cells: [
    cell({ width: 2, length: 13, outcomes: ["2"], token: "2", provenance: "asserted" }),
    cell({ width: 2, length: 26, outcomes: ["H"], token: "H", provenance: "derived" }),
    cell({ width: 4, length: 19, outcomes: ["H", "1"], token: "1h" }),
    cell({ width: 4, length: 4, outcomes: ["1"], token: "1", provenance: "searched" }),
    cell({ width: 3, length: 1, outcomes: ["V"], token: "V", provenance: "asserted" }),
    cell({
      width: 4,
      length: 22,
      outcomes: ["V", "H", "1", "2"],
      token: "?",
      provenance: "none",
      known: false,
    }),
  ],
};

describe("AtlasViewModel", () => {
  const vm = new AtlasViewModel(FIXTURE);

  it("mirrors the response exactly", () => {
    expect(vm.token(2, 13)).toBe("2");
    expect(vm.token(4, 19)).toBe("1h");
    expect(vm.token(9, 9)).toBe("?"); // absent cells render unknown
  });

  it("colors singleton outcomes by class and partials distinctly", () => {
    expect(vm.colorClass(3, 1)).toBe("outcome-v");
    expect(vm.colorClass(2, 26)).toBe("outcome-h");
    expect(vm.colorClass(4, 4)).toBe("outcome-first");
    expect(vm.colorClass(2, 13)).toBe("outcome-second");
    expect(vm.colorClass(4, 19)).toBe("outcome-partial");
    expect(vm.colorClass(4, 22)).toBe("outcome-unknown");
  });

  it("outlines searched and asserted seeds only", () => {
    expect(vm.outlined(4, 4)).toBe(true);
    expect(vm.outlined(2, 13)).toBe(true);
    expect(vm.outlined(2, 26)).toBe(false);
  });
});

const TRACE: TraceNode = {
  key: "rect:2x26",
  outcomes: ["H"],
  steps: [
    {
      rule: "h-concat",
      before: ["V", "H", "1", "2"],
      after: ["H"],
      details: {},
      premises: [
        { key: "rect:2x4", outcomes: ["H"], steps: [] },
        { key: "rect:2x22", outcomes: ["H"], steps: [] },
      ],
    },
  ],
  supports: [
    { rule: "h-concat", parts: [2, 24], outcomes: ["H", "1"] },
    { rule: "h-concat", parts: [13, 13], outcomes: ["H", "2"] },
  ],
};

describe("trace rendering", () => {
  it("shows the rule chain and both corroborating decompositions", () => {
    const lines = traceLines(TRACE);
    const text = lines.join("\n");
    expect(text).toContain("rect:2x26 = {H}");
    expect(text).toContain("[h-concat]");
    expect(text).toContain("rect:2x4");
    expect(text).toContain("2+24 -> {H,1}");
    expect(text).toContain("13+13 -> {H,2}");
  });

  it("describes supports compactly", () => {
    expect(describeSupport({ rule: "h-concat", parts: [13, 13], outcomes: ["H", "2"] })).toBe(
      "h-concat: 13+13 -> {H,2}",
    );
  });
});
