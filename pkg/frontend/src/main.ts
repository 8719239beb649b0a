import { ApiClient } from "./api.js";
import { startApp } from "./app.js";

// Served at /ui/, the API lives at the origin root.
startApp(document, new ApiClient(""));
