import { Api } from "./api";
import { AtlasScreen } from "./atlas_screen";
import { PlayScreen } from "./play";

const api = new Api("");

function boot(): void {
  const playRoot = document.getElementById("play-screen")!;
  const atlasRoot = document.getElementById("atlas-screen")!;
  const play = new PlayScreen(api, playRoot);
  const atlas = new AtlasScreen(api, atlasRoot);
  play.mount();
  atlas.mount();

  for (const tab of Array.from(document.querySelectorAll<HTMLButtonElement>(".tab"))) {
    tab.addEventListener("click", () => {
      document.querySelectorAll(".screen").forEach((s) => s.classList.add("hidden"));
      document.getElementById(tab.dataset.target!)!.classList.remove("hidden");
    });
  }
}

document.addEventListener("DOMContentLoaded", boot);
