import { Client } from "./api.js";
import { Workbench } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8765";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app root element");

const workbench = new Workbench(root, new Client(apiBase));
workbench.init().catch((err) => {
  root.textContent = `failed to reach the vizcheck service at ${apiBase}: ${err}`;
});
