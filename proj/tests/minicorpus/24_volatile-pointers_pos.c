void f(void)
{
    int x = 0;
    volatile int *p = &x;
    (void)p;
}
