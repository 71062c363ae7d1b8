import type { Cell, MoveRecord, PlayerToken, SessionRecord } from "./types";

export type CellState = "empty" | "V" | "H" | "selected" | "preview";

/** Board state derived purely from session records; the only rule the
 * view model knows is same-board adjacency for the move preview. */
export class BoardViewModel {
  readonly width: number;
  readonly length: number;
  readonly humanSide: PlayerToken;
  private occupiedBy = new Map<string, PlayerToken>();
  private record: SessionRecord;
  selection: Cell | null = null;

  constructor(record: SessionRecord) {
    this.width = record.width;
    this.length = record.length;
    this.humanSide = record.engine_side === "V" ? "H" : "V";
    this.record = record;
    this.update(record);
  }

  update(record: SessionRecord): void {
    this.record = record;
    this.occupiedBy.clear();
    for (const move of record.moves) {
      for (const cell of move.cells) {
        this.occupiedBy.set(keyOf(cell as Cell), move.player);
      }
    }
    if (this.selection && this.occupiedBy.has(keyOf(this.selection))) {
      this.selection = null;
    }
  }

  get status(): SessionRecord["status"] {
    return this.record.status;
  }

  get winner(): PlayerToken | null {
    return this.record.winner;
  }

  get toMove(): PlayerToken {
    return this.record.to_move;
  }

  get humanTurn(): boolean {
    return this.record.status === "open" && this.record.to_move === this.humanSide;
  }

  occupant(cell: Cell): PlayerToken | undefined {
    return this.occupiedBy.get(keyOf(cell));
  }

  /** The cells the human could pair with the current selection: adjacency
   * in their orientation only (vertical pairs span rows, horizontal span
   * columns). */
  previewCells(): Cell[] {
    if (!this.selection || !this.humanTurn) return [];
    const [r, c] = this.selection;
    const candidates: Cell[] =
      this.humanSide === "V"
        ? [
            [r - 1, c],
            [r + 1, c],
          ]
        : [
            [r, c - 1],
            [r, c + 1],
          ];
    return candidates.filter(
      (cell) =>
        cell[0] >= 0 &&
        cell[0] < this.width &&
        cell[1] >= 0 &&
        cell[1] < this.length &&
        !this.occupiedBy.has(keyOf(cell)),
    );
  }

  stateOf(cell: Cell): CellState {
    const occupant = this.occupiedBy.get(keyOf(cell));
    if (occupant) return occupant;
    if (this.selection && keyOf(this.selection) === keyOf(cell)) return "selected";
    if (this.previewCells().some((p) => keyOf(p) === keyOf(cell))) return "preview";
    return "empty";
  }

  /** Handle a click; returns a complete move when the second cell lands. */
  click(cell: Cell): { move?: [Cell, Cell]; hint?: string } {
    if (!this.humanTurn) {
      return { hint: this.record.status === "open" ? "engine to move" : "game over" };
    }
    if (this.occupiedBy.has(keyOf(cell))) {
      return { hint: "that cell is occupied" };
    }
    if (!this.selection) {
      this.selection = cell;
      return {};
    }
    if (keyOf(this.selection) === keyOf(cell)) {
      this.selection = null;
      return {};
    }
    const pair = this.previewCells().some((p) => keyOf(p) === keyOf(cell));
    if (!pair) {
      this.selection = cell;
      return {
        hint:
          this.humanSide === "V"
            ? "vertical moves pair two cells in one column"
            : "horizontal moves pair two cells in one row",
      };
    }
    const move: [Cell, Cell] = [this.selection, cell];
    this.selection = null;
    return { move };
  }

  transcript(): string {
    const lines = [
      `# domineering rect:${this.width}x${this.length} engine=${this.record.engine_side ?? "-"}`,
    ];
    for (const move of this.record.moves) {
      lines.push(moveText(move));
    }
    if (this.record.status === "finished" && this.record.winner) {
      lines.push(`# winner: ${this.record.winner}`);
    }
    return lines.join("\n") + "\n";
  }
}

function keyOf(cell: Cell): string {
  return `${cell[0]},${cell[1]}`;
}

export function columnLabel(c: number): string {
  let label = "";
  let n = c + 1;
  while (n > 0) {
    const rem = (n - 1) % 26;
    label = String.fromCharCode(97 + rem) + label;
    n = Math.floor((n - 1) / 26);
  }
  return label;
}

export function cellName(cell: Cell): string {
  return `${columnLabel(cell[1])}${cell[0] + 1}`;
}

export function moveText(move: MoveRecord): string {
  const [a, b] = move.cells;
  return `${move.player} ${cellName(a as Cell)}:${cellName(b as Cell)}`;
}

export const ENGINE_WIDTHS = [2, 3, 4, 5, 7, 9, 11];

export function engineSupportNote(width: number): string | null {
  if (ENGINE_WIDTHS.includes(width)) return null;
  return `unsupported width ${width}: the engine plays widths ${ENGINE_WIDTHS.join(", ")}`;
}
