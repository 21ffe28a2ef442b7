// Plain object (no `defineConfig` import) so the config also loads when
// typescript/vitest come from a global install without local node_modules.
export default {
  test: {
    include: ["test/**/*.test.ts"],
  },
};
