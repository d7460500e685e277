/**
 * main.ts — browser entry point. The service URL defaults to same-origin
 * and can be overridden with ?api=http://host:port for local development.
 */

import { initApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "";
const root = document.getElementById("app");
if (!(root instanceof HTMLElement)) {
  throw new Error("missing #app container");
}
initApp(root, { apiBase });
