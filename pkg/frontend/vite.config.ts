import { defineConfig } from "vitest/config";

export default defineConfig({
    base: "./",
    build: {
        outDir: "dist",
        emptyOutDir: true
    },
    server: {
        proxy: {
            "/models": "http://127.0.0.1:8080",
            "/trajectory": "http://127.0.0.1:8080"
        }
    },
    test: {
        environment: "happy-dom"
    }
});
