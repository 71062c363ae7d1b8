import { Api, ApiError } from "./api";
import { BoardViewModel, engineSupportNote } from "./board";
import type { Cell, PlayerToken, SessionRecord } from "./types";

/** Play screen: a clickable board versus the engine.  All game mutations go
 * through the API; clicks are validated only for adjacency preview. */
export class PlayScreen {
  private vm: BoardViewModel | null = null;
  private sessionId: string | null = null;
  private busy = false;

  constructor(
    private readonly api: Api,
    private readonly root: HTMLElement,
  ) {}

  mount(): void {
    this.root.innerHTML = `
      <form class="controls" id="new-game">
        <label>width <input name="width" type="number" value="3" min="1" max="11"></label>
        <label>length <input name="length" type="number" value="10" min="1" max="30"></label>
        <label>engine side
          <select name="engine"><option value="H">H</option><option value="V">V</option>
          <option value="auto">auto</option></select>
        </label>
        <button type="submit">new game</button>
        <span id="width-note" class="note"></span>
      </form>
      <div id="status" class="status"></div>
      <div id="board" class="board"></div>
      <div class="controls">
        <button id="download" disabled>download transcript</button>
      </div>
    `;
    const form = this.root.querySelector<HTMLFormElement>("#new-game")!;
    const widthInput = form.querySelector<HTMLInputElement>("[name=width]")!;
    widthInput.addEventListener("input", () => this.updateWidthNote());
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.newGame(form);
    });
    this.root
      .querySelector<HTMLButtonElement>("#download")!
      .addEventListener("click", () => this.download());
    this.updateWidthNote();
  }

  private updateWidthNote(): void {
    const form = this.root.querySelector<HTMLFormElement>("#new-game")!;
    const width = Number(form.querySelector<HTMLInputElement>("[name=width]")!.value);
    const note = engineSupportNote(width);
    this.root.querySelector("#width-note")!.textContent = note ?? "";
    const engine = form.querySelector<HTMLSelectElement>("[name=engine]")!;
    engine.disabled = note !== null;
  }

  private async newGame(form: HTMLFormElement): Promise<void> {
    const width = Number(form.querySelector<HTMLInputElement>("[name=width]")!.value);
    const length = Number(form.querySelector<HTMLInputElement>("[name=length]")!.value);
    const engine = form.querySelector<HTMLSelectElement>("[name=engine]")!
      .value as PlayerToken | "auto";
    try {
      const record = await this.api.createSession(width, length, engine);
      this.sessionId = record.id;
      this.vm = new BoardViewModel(record);
      this.setStatus(`you play ${this.vm.humanSide}; engine recipe: ${record.recipe}`);
      this.render(record);
      await this.letEngineOpen(record);
    } catch (error) {
      this.setStatus(this.describeError(error));
    }
  }

  private async letEngineOpen(record: SessionRecord): Promise<void> {
    if (
      record.status === "open" &&
      record.engine_side !== null &&
      record.to_move === record.engine_side
    ) {
      const updated = await this.api.engineMove(record.id);
      this.vm!.update(updated);
      this.render(updated);
    }
  }

  private async onCellClick(cell: Cell): Promise<void> {
    if (!this.vm || !this.sessionId || this.busy) return;
    const { move, hint } = this.vm.click(cell);
    if (hint) this.setStatus(hint);
    this.render();
    if (!move) return;
    this.busy = true;
    try {
      let record = await this.api.move(this.sessionId, this.vm.humanSide, move);
      this.vm.update(record);
      this.render(record);
      if (record.status === "open" && record.to_move === record.engine_side) {
        record = await this.api.engineMove(this.sessionId);
        this.vm.update(record);
        this.render(record);
      }
      if (record.status === "finished") {
        this.setStatus(`game over: ${record.winner} wins`);
      }
    } catch (error) {
      this.setStatus(this.describeError(error));
      const fresh = await this.api.session(this.sessionId);
      this.vm.update(fresh);
      this.render(fresh);
    } finally {
      this.busy = false;
    }
  }

  private describeError(error: unknown): string {
    if (error instanceof ApiError) return `server: ${error.message}`;
    return String(error);
  }

  private setStatus(text: string): void {
    this.root.querySelector("#status")!.textContent = text;
  }

  private render(record?: SessionRecord): void {
    if (!this.vm) return;
    const board = this.root.querySelector<HTMLDivElement>("#board")!;
    board.style.gridTemplateColumns = `repeat(${this.vm.length}, 28px)`;
    board.innerHTML = "";
    for (let r = 0; r < this.vm.width; r++) {
      for (let c = 0; c < this.vm.length; c++) {
        const cell: Cell = [r, c];
        const div = document.createElement("div");
        div.className = `cell cell-${this.vm.stateOf(cell)}`;
        div.addEventListener("click", () => void this.onCellClick(cell));
        board.appendChild(div);
      }
    }
    const download = this.root.querySelector<HTMLButtonElement>("#download")!;
    download.disabled = this.vm.status !== "finished";
    if (record && record.status === "finished" && record.winner) {
      this.setStatus(`game over: ${record.winner} wins`);
    }
  }

  private download(): void {
    if (!this.vm) return;
    const blob = new Blob([this.vm.transcript()], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "domineering-transcript.txt";
    link.click();
    URL.revokeObjectURL(link.href);
  }
}
