import { Api, ApiError } from "./api";
import { AtlasViewModel, traceLines } from "./atlas";

const TOPOLOGIES = ["rect", "cylinder-h", "cylinder-v", "torus"];

/** Atlas screen: outcome heatmap with per-cell derivation drill-down. */
export class AtlasScreen {
  private vm: AtlasViewModel | null = null;
  private topology = "rect";

  constructor(
    private readonly api: Api,
    private readonly root: HTMLElement,
  ) {}

  mount(): void {
    this.root.innerHTML = `
      <div class="controls" id="topo-buttons"></div>
      <div id="atlas-grid" class="atlas"></div>
      <pre id="trace" class="trace">click a cell for its derivation</pre>
    `;
    const buttons = this.root.querySelector("#topo-buttons")!;
    for (const topo of TOPOLOGIES) {
      const button = document.createElement("button");
      button.textContent = topo;
      button.addEventListener("click", () => void this.load(topo));
      buttons.appendChild(button);
    }
    void this.load("rect");
  }

  private async load(topology: string): Promise<void> {
    this.topology = topology;
    const response = await this.api.atlas(topology, 11, 32);
    this.vm = new AtlasViewModel(response);
    this.render();
  }

  private render(): void {
    if (!this.vm) return;
    const grid = this.root.querySelector<HTMLDivElement>("#atlas-grid")!;
    grid.style.gridTemplateColumns = `repeat(${this.vm.maxLength + 1}, 26px)`;
    grid.innerHTML = "";
    grid.appendChild(headerCell(""));
    for (let n = 1; n <= this.vm.maxLength; n++) grid.appendChild(headerCell(String(n)));
    for (let w = 1; w <= this.vm.maxWidth; w++) {
      grid.appendChild(headerCell(String(w)));
      for (let n = 1; n <= this.vm.maxLength; n++) {
        const div = document.createElement("div");
        div.textContent = this.vm.token(w, n);
        div.className = `acell ${this.vm.colorClass(w, n)}`;
        if (this.vm.outlined(w, n)) div.classList.add("seeded");
        div.addEventListener("click", () => void this.drill(w, n));
        grid.appendChild(div);
      }
    }
  }

  private async drill(width: number, length: number): Promise<void> {
    const trace = this.root.querySelector<HTMLPreElement>("#trace")!;
    try {
      const node = await this.api.derivation(this.topology, width, length);
      trace.textContent = traceLines(node).join("\n");
    } catch (error) {
      trace.textContent =
        error instanceof ApiError && error.status === 404
          ? `${this.topology}:${width}x${length}: unknown`
          : String(error);
    }
  }
}

function headerCell(text: string): HTMLDivElement {
  const div = document.createElement("div");
  div.textContent = text;
  div.className = "acell header";
  return div;
}
