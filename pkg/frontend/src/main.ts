import { ApiClient, apiBaseFromLocation } from "./api";
import { ExplorerApp } from "./app";
import { parse } from "./state";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const api = new ApiClient(apiBaseFromLocation(window.location.search));
const app = new ExplorerApp(root, api, parse(window.location.search.slice(1)));
void app.start();
