import { ApiClient } from "./client";
import { mount } from "./app";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app root element");

const base = (root.dataset.apiBase ?? window.location.origin).replace(/\/$/, "");
mount(root, new ApiClient(base));
