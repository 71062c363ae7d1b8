import type { AtlasCell, AtlasResponse, Support, TraceNode } from "./types";

/** Grid of outcome cells colored by class, with searched/asserted seeds
 * outlined; mirrors the /atlas response exactly. */
export class AtlasViewModel {
  readonly topology: string;
  readonly maxWidth: number;
  readonly maxLength: number;
  private byKey = new Map<string, AtlasCell>();

  constructor(response: AtlasResponse) {
    this.topology = response.topology;
    this.maxWidth = response.max_width;
    this.maxLength = response.max_length;
    for (const cell of response.cells) {
      this.byKey.set(`${cell.width}x${cell.length}`, cell);
    }
  }

  cell(width: number, length: number): AtlasCell | undefined {
    return this.byKey.get(`${width}x${length}`);
  }

  token(width: number, length: number): string {
    return this.cell(width, length)?.token ?? "?";
  }

  /** CSS class for the cell's dominant outcome color. */
  colorClass(width: number, length: number): string {
    const cell = this.cell(width, length);
    if (!cell || !cell.known) return "outcome-unknown";
    if (cell.outcomes.length === 1) {
      return { V: "outcome-v", H: "outcome-h", "1": "outcome-first", "2": "outcome-second" }[
        cell.outcomes[0]
      ] ?? "outcome-unknown";
    }
    return "outcome-partial";
  }

  /** Searched and asserted seeds get the emphasized border. */
  outlined(width: number, length: number): boolean {
    const cell = this.cell(width, length);
    return cell !== undefined && (cell.provenance === "searched" || cell.provenance === "asserted");
  }
}

export function describeSupport(s: Support): string {
  const parts = s.parts.join("+");
  return `${s.rule}: ${parts} -> {${s.outcomes.join(",")}}`;
}

/** Flatten a derivation tree into indented text lines for display. */
export function traceLines(node: TraceNode, depth = 0): string[] {
  const pad = "  ".repeat(depth);
  const lines = [`${pad}${node.key} = {${node.outcomes.join(",")}}`];
  for (const step of node.steps) {
    lines.push(`${pad}  [${step.rule}] {${step.before.join(",")}} -> {${step.after.join(",")}}`);
    for (const premise of step.premises) {
      lines.push(...traceLines(premise, depth + 2));
    }
  }
  if (node.supports && node.supports.length) {
    lines.push(`${pad}  corroborated by:`);
    for (const support of node.supports) {
      lines.push(`${pad}    ${describeSupport(support)}`);
    }
  }
  return lines;
}
