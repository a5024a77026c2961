import { ApiClient } from "./api.js";
import { createApp } from "./app.js";
const root = document.getElementById("app");
if (!root) {
    throw new Error("missing #app element");
}
// same-origin API: the service serves these assets itself
createApp(root, new ApiClient(""), window.localStorage);
