import { defineConfig } from "vite";

// In development the API and WebSocket traffic proxies to a locally running
// fairships-server (FAIRSHIPS_API to point elsewhere).
const target = process.env.FAIRSHIPS_API ?? "http://127.0.0.1:8000";

export default defineConfig({
  server: {
    proxy: {
      "/games": {
        target,
        changeOrigin: true,
        ws: true,
      },
    },
  },
});
