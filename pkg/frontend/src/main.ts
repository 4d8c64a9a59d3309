import { SuggestClient } from "./api.js";
import { mount } from "./app.js";

declare global {
  interface Window {
    TASKSUGG_API?: string;
  }
}

const baseUrl = window.TASKSUGG_API ?? "http://127.0.0.1:8080";
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
mount(root, new SuggestClient(baseUrl));
