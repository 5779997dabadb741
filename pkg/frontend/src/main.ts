import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    HREIS_API_BASE?: string;
  }
}

const params = new URLSearchParams(window.location.search);
const baseUrl = window.HREIS_API_BASE ?? params.get("api") ?? "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
const app = new App(root, new ApiClient(baseUrl));
void app.start();
