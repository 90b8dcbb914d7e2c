// Workbench wiring: dataset picker, shelves, filters, model bar, and the
// check view. Every number on screen comes from a service response; the
// client computes layout geometry only. At most one /check request is in
// flight; superseded requests are aborted so stale frames never land.

import { ApiError, WorkbenchClient } from "./api.js";
import { FiltersPanel } from "./filters.js";
import { DEFAULT_FRAME_INTERVAL_MS, HopsPlayer } from "./hops.js";
import { renderLayout } from "./render.js";
import { ShelfAssignments, Shelves } from "./shelves.js";
import type { DatasetInfo, FamilyInfo } from "./types.js";
import { ModelBar } from "./modelbar.js";

const N_DRAWS = 50;
const CHECK_SEED = 1;

export class Workbench {
  shelves = new Shelves();
  filters = new FiltersPanel();
  modelBar: ModelBar | null = null;
  player: HopsPlayer | null = null;

  datasets: DatasetInfo[] = [];
  families: FamilyInfo[] = [];
  baseDataset: DatasetInfo | null = null;
  currentDataset: DatasetInfo | null = null;
  showResiduals = false;

  private chartArea: HTMLElement | null = null;
  private banner: HTMLElement | null = null;
  private playButton: HTMLButtonElement | null = null;
  private inflight: AbortController | null = null;

  constructor(private root: HTMLElement, private client: WorkbenchClient) {}

  async init(): Promise<void> {
    [this.datasets, this.families] = await Promise.all([
      this.client.listDatasets(),
      this.client.listFamilies(),
    ]);
    this.buildSkeleton();
    if (this.datasets.length > 0) {
      await this.selectDataset(this.datasets[0]);
    }
  }

  private buildSkeleton(): void {
    this.root.replaceChildren();
    this.root.className = "vc-workbench";

    const sidebar = document.createElement("aside");
    sidebar.className = "vc-sidebar";

    const dataHead = document.createElement("div");
    dataHead.className = "vc-section-head";
    dataHead.textContent = "data";
    sidebar.appendChild(dataHead);

    const picker = document.createElement("select");
    picker.className = "vc-dataset-picker";
    for (const d of this.datasets) {
      const opt = document.createElement("option");
      opt.value = d.id;
      opt.textContent = `${d.name} (${d.n_rows})`;
      picker.appendChild(opt);
    }
    picker.addEventListener("change", () => {
      const ds = this.datasets.find((d) => d.id === picker.value);
      if (ds) void this.selectDataset(ds);
    });
    sidebar.appendChild(picker);

    const shelvesHead = document.createElement("div");
    shelvesHead.className = "vc-section-head";
    shelvesHead.textContent = "encodings";
    sidebar.appendChild(shelvesHead);
    const shelvesBox = document.createElement("div");
    this.shelves.mount(shelvesBox);
    this.shelves.onChange = () => void this.refreshCheck();
    sidebar.appendChild(shelvesBox);

    const filtersBox = document.createElement("div");
    this.filters.mount(filtersBox);
    this.filters.onApply = (filters, transforms) =>
      void this.applyPipeline(filters, transforms);
    sidebar.appendChild(filtersBox);

    const center = document.createElement("main");
    center.className = "vc-center";

    this.banner = document.createElement("div");
    this.banner.className = "vc-banner vc-hidden";
    center.appendChild(this.banner);

    const controls = document.createElement("div");
    controls.className = "vc-chart-controls";
    this.playButton = document.createElement("button");
    this.playButton.className = "vc-play";
    this.playButton.textContent = "pause";
    this.playButton.addEventListener("click", () => {
      this.player?.toggle();
      this.updatePlayButton();
    });
    controls.appendChild(this.playButton);

    const residualToggle = document.createElement("label");
    residualToggle.className = "vc-residual-toggle";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.addEventListener("change", () => {
      this.showResiduals = box.checked;
      void this.refreshCheck();
    });
    residualToggle.appendChild(box);
    residualToggle.appendChild(document.createTextNode(" residuals"));
    controls.appendChild(residualToggle);
    center.appendChild(controls);

    this.chartArea = document.createElement("div");
    this.chartArea.className = "vc-chart-area";
    center.appendChild(this.chartArea);

    const bar = document.createElement("footer");
    bar.className = "vc-model-bar";
    const barHead = document.createElement("div");
    barHead.className = "vc-section-head";
    barHead.textContent = "models";
    bar.appendChild(barHead);
    const barBox = document.createElement("div");
    this.modelBar = new ModelBar(this.client, this.families,
                                 () => this.currentDataset?.id ?? null);
    this.modelBar.onModelsChanged = () => void this.refreshCheck();
    this.modelBar.mount(barBox);
    bar.appendChild(barBox);

    this.root.appendChild(sidebar);
    this.root.appendChild(center);
    this.root.appendChild(bar);
  }

  async selectDataset(ds: DatasetInfo): Promise<void> {
    this.baseDataset = ds;
    this.currentDataset = ds;
    this.shelves.setSchema(ds.schema);
    this.filters.setSchema(ds.schema);
    if (this.modelBar) {
      this.modelBar.entries = [];
      this.modelBar.addEntry();
    }
    await this.refreshCheck();
  }

  async applyPipeline(filters: Parameters<WorkbenchClient["runPipeline"]>[1],
                      transforms: Parameters<WorkbenchClient["runPipeline"]>[2])
      : Promise<void> {
    if (!this.baseDataset) return;
    try {
      this.currentDataset = (filters.length || transforms.length)
        ? await this.client.runPipeline(this.baseDataset.id, filters,
                                        transforms)
        : this.baseDataset;
    } catch (err) {
      this.showError(err);
      return;
    }
    // models were fit against the previous table state; refit them
    await this.modelBar?.refitAll();
    await this.refreshCheck();
  }

  private updatePlayButton(): void {
    if (this.playButton) {
      this.playButton.textContent = this.player?.playing ? "pause" : "play";
    }
  }

  private showError(err: unknown): void {
    if (!this.banner) return;
    const message = err instanceof ApiError
      ? `${err.code}: ${err.message}` : String(err);
    this.banner.textContent = message;
    this.banner.classList.remove("vc-hidden");
  }

  private clearError(): void {
    this.banner?.classList.add("vc-hidden");
  }

  async refreshCheck(): Promise<void> {
    if (!this.chartArea || !this.currentDataset) return;
    const a: ShelfAssignments = this.shelves.assignments;
    if (!a.x && !a.y) {
      this.player?.dispose();
      this.player = null;
      this.chartArea.replaceChildren();
      const hint = document.createElement("div");
      hint.className = "vc-hint";
      hint.textContent = "drag a variable onto x or y to start";
      this.chartArea.appendChild(hint);
      return;
    }

    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let layout;
    try {
      layout = await this.client.check({
        dataset: this.currentDataset.id,
        chart: { x: a.x, y: a.y, row: a.row, column: a.column,
                 show_residuals: this.showResiduals },
        models: this.modelBar?.modelIds() ?? [],
        n_draws: N_DRAWS,
        seed: CHECK_SEED,
      }, controller.signal);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      this.showError(err);  // previous view stays on screen
      return;
    }
    if (this.inflight !== controller) return;  // superseded

    this.clearError();
    this.player?.dispose();
    const rendered = renderLayout(this.chartArea, layout);
    this.player = new HopsPlayer(rendered.panels, rendered.nDraws,
                                 DEFAULT_FRAME_INTERVAL_MS);
    this.player.play();
    this.updatePlayButton();
  }
}
