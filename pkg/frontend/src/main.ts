// Browser entry point: ?session=<id> selects the session; the base URL
// defaults to the serving origin.

import { ApiClient } from './api'
import { Console, consoleElements } from './app'

const params = new URLSearchParams(window.location.search)
const sessionId = params.get('session')

async function boot(): Promise<void> {
  const header = document.getElementById('header')
  if (!sessionId) {
    if (header) header.textContent = 'Add ?session=<id> to the URL.'
    return
  }
  const api = new ApiClient(params.get('api') ?? '')
  const app = new Console(api, sessionId, consoleElements(document))
  await app.load()
  window.setInterval(() => void app.load(), 2000)
}

void boot()
